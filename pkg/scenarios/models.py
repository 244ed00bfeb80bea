# scenarios/models.py
# Choice sets only; nothing in this app is stored in the database.
from django.db import models


class Layout(models.TextChoices):
    STATIC_STATIC = 'static_static', 'Static-Static'
    STATIC_DYNAMIC = 'static_dynamic', 'Static-Dynamic'
    DYNAMIC_DYNAMIC = 'dynamic_dynamic', 'Dynamic-Dynamic'


class Verdict(models.TextChoices):
    PASS = 'PASS', 'PASS'
    FAIL = 'FAIL', 'FAIL'


class Statistic(models.TextChoices):
    MAX = 'max', 'Maximum (max)'
    MIN = 'min', 'Minimum (min)'
    AVG = 'avg', 'Average (avg)'
