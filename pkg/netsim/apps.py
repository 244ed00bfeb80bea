from django.apps import AppConfig


class NetsimConfig(AppConfig):
    name = 'netsim'
    verbose_name = 'Two-node network simulator'
