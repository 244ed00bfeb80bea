# kem/serializers.py
from rest_framework import serializers
from django.utils.translation import gettext_lazy as _

from pqcpslab.base_serializers import BaseReportSerializer, HexBytesField
from .params import KemVariant, PARAMETER_SETS


# ==================== PARAMETER SERIALIZERS ====================

class SecurityProfileSerializer(BaseReportSerializer):
    nist_level = serializers.IntegerField()
    core_svp_classical_bits = serializers.IntegerField()
    core_svp_quantum_bits = serializers.IntegerField()
    gate_count_log2 = serializers.IntegerField()
    memory_log2 = serializers.IntegerField()


class KemParamsSerializer(BaseReportSerializer):
    """Parameter set with sizes and claimed security"""
    scheme = serializers.SerializerMethodField()
    variant = serializers.CharField()
    n = serializers.IntegerField()
    k = serializers.IntegerField()
    q = serializers.IntegerField()
    eta1 = serializers.IntegerField()
    eta2 = serializers.IntegerField()
    du = serializers.IntegerField()
    dv = serializers.IntegerField()
    delta_log2 = serializers.IntegerField()
    pk_len = serializers.IntegerField()
    sk_len = serializers.IntegerField()
    ct_len = serializers.IntegerField()
    ss_len = serializers.IntegerField()
    security = SecurityProfileSerializer()

    def get_scheme(self, obj):
        return obj.label


# ==================== TIMING SERIALIZERS ====================

class OpTimingSerializer(BaseReportSerializer):
    """One row of the operation timing table"""
    scheme = serializers.SerializerMethodField()
    op = serializers.CharField()
    samples = serializers.IntegerField()
    mean_us = serializers.FloatField()
    median_us = serializers.FloatField()
    min_us = serializers.FloatField()
    max_us = serializers.FloatField()
    cycle_estimate = serializers.IntegerField()

    def get_scheme(self, obj):
        return KemVariant(obj.variant).label


# ==================== KNOWN-ANSWER VECTORS ====================

def _params_with(attr, length):
    matches = [p for p in PARAMETER_SETS.values() if getattr(p, attr) == length]
    if not matches:
        raise serializers.ValidationError(
            _("Key length {length} matches no parameter set.").format(length=length)
        )
    return matches[0]


def _check_length(params, value, attr, name):
    if len(value) != getattr(params, attr):
        raise serializers.ValidationError(
            _("{name} length {length} does not match {variant}.").format(
                name=name, length=len(value), variant=params.label
            )
        )


class KatVectorSerializer(serializers.Serializer):
    """Chained record: keygen seed, encaps seed and every output"""
    seed_keygen = HexBytesField(byte_length=64)
    seed_encaps = HexBytesField(byte_length=32)
    pk = HexBytesField()
    sk = HexBytesField()
    ct = HexBytesField()
    ss = HexBytesField(byte_length=32)

    def validate(self, attrs):
        params = _params_with('pk_len', len(attrs['pk']))
        _check_length(params, attrs['sk'], 'sk_len', 'Secret key')
        _check_length(params, attrs['ct'], 'ct_len', 'Ciphertext')
        attrs['variant'] = params.variant
        return attrs


class KatKeygenSerializer(serializers.Serializer):
    d = HexBytesField(byte_length=32)
    z = HexBytesField(byte_length=32)
    ek = HexBytesField()
    dk = HexBytesField()

    def validate(self, attrs):
        params = _params_with('pk_len', len(attrs['ek']))
        _check_length(params, attrs['dk'], 'sk_len', 'Decapsulation key')
        return {'variant': params.variant, 'seed_keygen': attrs['d'] + attrs['z'], 'pk': attrs['ek'], 'sk': attrs['dk']}


class KatEncapsSerializer(serializers.Serializer):
    ek = HexBytesField()
    m = HexBytesField(byte_length=32)
    c = HexBytesField()
    k = HexBytesField(byte_length=32)

    def validate(self, attrs):
        params = _params_with('pk_len', len(attrs['ek']))
        _check_length(params, attrs['c'], 'ct_len', 'Ciphertext')
        return {'variant': params.variant, 'pk': attrs['ek'], 'seed_encaps': attrs['m'], 'ct': attrs['c'], 'ss': attrs['k']}


class KatDecapsSerializer(serializers.Serializer):
    """Accepting and rejecting decapsulation cases alike"""
    dk = HexBytesField()
    c = HexBytesField()
    k = HexBytesField(byte_length=32)

    def validate(self, attrs):
        params = _params_with('sk_len', len(attrs['dk']))
        _check_length(params, attrs['c'], 'ct_len', 'Ciphertext')
        return {'variant': params.variant, 'sk': attrs['dk'], 'ct': attrs['c'], 'ss': attrs['k']}
