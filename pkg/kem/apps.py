from django.apps import AppConfig


class KemConfig(AppConfig):
    name = 'kem'
    verbose_name = 'ML-KEM core'
