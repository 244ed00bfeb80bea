import os

import django

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'pqcpslab.settings')
django.setup()
