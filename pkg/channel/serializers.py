# channel/serializers.py
from rest_framework import serializers

from kem.params import KemVariant
from pqcpslab.base_serializers import BaseReportSerializer


class HandshakeTranscriptSerializer(BaseReportSerializer):
    """Handshake outcome: sizes and flags only, never key material"""
    scheme = serializers.SerializerMethodField()
    variant = serializers.CharField()
    public_key_bytes = serializers.IntegerField()
    ciphertext_bytes = serializers.IntegerField()
    encrypted_data_bytes = serializers.IntegerField()
    plaintext_bytes = serializers.IntegerField()
    keys_agree = serializers.BooleanField()
    data_authenticated = serializers.BooleanField()
    tampered = serializers.BooleanField()

    def get_scheme(self, obj):
        return KemVariant(obj.variant).label
