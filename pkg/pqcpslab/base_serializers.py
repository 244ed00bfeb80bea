# pqcpslab/base_serializers.py
from rest_framework import serializers
from django.utils.translation import gettext_lazy as _

from .exceptions import ConfigurationError


def flatten_errors(errors, prefix=''):
    """Flatten DRF's nested ``serializer.errors`` into (path, message) pairs"""
    flat = []
    if isinstance(errors, dict):
        for key, value in errors.items():
            path = f"{prefix}.{key}" if prefix else str(key)
            flat.extend(flatten_errors(value, path))
    elif isinstance(errors, list):
        for index, value in enumerate(errors):
            if isinstance(value, (dict, list)) and value:
                flat.extend(flatten_errors(value, f"{prefix}[{index}]"))
            elif value:
                flat.append((prefix, str(value)))
    else:
        flat.append((prefix, str(errors)))
    return flat


def validated_or_raise(serializer, error_class=ConfigurationError):
    """Run ``is_valid`` and turn errors into a lab exception"""
    if serializer.is_valid():
        return serializer.validated_data
    messages = [f"{path}: {message}" if path else message for path, message in flatten_errors(serializer.errors)]
    raise error_class('; '.join(messages))


class BaseReportSerializer(serializers.Serializer):
    """Base for read-only report serializers used by all apps"""

    def create(self, validated_data):
        raise NotImplementedError(_("Report serializers are read-only."))

    def update(self, instance, validated_data):
        raise NotImplementedError(_("Report serializers are read-only."))


class HexBytesField(serializers.CharField):
    """Hex string on the wire, bytes in Python"""

    default_error_messages = {
        'invalid_hex': _('Value is not valid hexadecimal.'),
        'length': _('Expected {expected} bytes, got {actual}.'),
    }

    def __init__(self, *, byte_length=None, **kwargs):
        self.byte_length = byte_length
        super().__init__(**kwargs)

    def to_internal_value(self, data):
        text = super().to_internal_value(data)
        try:
            value = bytes.fromhex(text)
        except ValueError:
            self.fail('invalid_hex')
        if self.byte_length is not None and len(value) != self.byte_length:
            self.fail('length', expected=self.byte_length, actual=len(value))
        return value

    def to_representation(self, value):
        return bytes(value).hex()


class LabeledChoiceField(serializers.ChoiceField):
    """Accepts a TextChoices value or its label, ignoring case and punctuation"""

    def __init__(self, choices_class, aliases=None, **kwargs):
        self.choices_class = choices_class
        self.lookup = {}
        for member in choices_class:
            self.lookup[_normalize(member.value)] = member
            self.lookup[_normalize(member.label)] = member
        for alias, member in (aliases or {}).items():
            self.lookup[_normalize(alias)] = member
        super().__init__(choices=choices_class.choices, **kwargs)

    def to_internal_value(self, data):
        member = self.lookup.get(_normalize(data))
        if member is None:
            self.fail('invalid_choice', input=data)
        return member

    def to_representation(self, value):
        return self.choices_class(value).label


def _normalize(text):
    return ''.join(ch for ch in str(text).lower() if ch.isalnum())
