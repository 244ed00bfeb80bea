# netsim/serializers.py
from rest_framework import serializers

from pqcpslab.base_serializers import BaseReportSerializer


class TraceRecordSerializer(BaseReportSerializer):
    """One NDJSON trace line; key order is part of the export format"""
    time_us = serializers.FloatField()
    node = serializers.CharField()
    action = serializers.CharField()
    msg_kind = serializers.CharField(allow_null=True)
    size_bytes = serializers.IntegerField()
    delay_us = serializers.FloatField()
