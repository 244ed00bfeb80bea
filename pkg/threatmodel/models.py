# threatmodel/models.py
# Choice sets only; dataflow models are read from JSON, never stored.
from django.db import models


class ElementKind(models.TextChoices):
    PROCESS = 'process', 'Process'
    EXTERNAL_ENTITY = 'external_entity', 'ExternalEntity'
    DATA_STORE = 'data_store', 'DataStore'


class FlowMedium(models.TextChoices):
    WIRED = 'wired', 'Wired'
    WIRELESS = 'wireless', 'Wireless'


class BoundaryKind(models.TextChoices):
    TRUST_BORDER = 'trust_border', 'TrustBorder'
    TRUST_LINE = 'trust_line', 'TrustLine'


class StrideCategory(models.TextChoices):
    SPOOFING = 'spoofing', 'Spoofing'
    TAMPERING = 'tampering', 'Tampering'
    REPUDIATION = 'repudiation', 'Repudiation'
    INFORMATION_DISCLOSURE = 'information_disclosure', 'Information Disclosure'
    DENIAL_OF_SERVICE = 'denial_of_service', 'Denial of Service'
    ELEVATION_OF_PRIVILEGE = 'elevation_of_privilege', 'Elevation of Privilege'


class Priority(models.TextChoices):
    HIGH = 'high', 'High'
    MEDIUM = 'medium', 'Medium'
    LOW = 'low', 'Low'


class SchemeType(models.TextChoices):
    SYMMETRIC_KEY = 'symmetric_key', 'Symmetric Key'
    PUBLIC_KEY = 'public_key', 'Public Key'
    HASH_FUNCTION = 'hash_function', 'Hash Functions'
