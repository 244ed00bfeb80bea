from django.apps import AppConfig


class LabcliConfig(AppConfig):
    name = 'labcli'
    verbose_name = 'Lab command line'
