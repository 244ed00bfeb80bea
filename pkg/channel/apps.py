from django.apps import AppConfig


class ChannelConfig(AppConfig):
    name = 'channel'
    verbose_name = 'KEM + AES-256-GCM secure channel'
