# scenarios/serializers.py
from django.conf import settings
from django.utils.translation import gettext_lazy as _
from rest_framework import serializers

from channel.wire import MessageKind
from kem.bench import BenchMode
from kem.params import KemVariant
from kem.serializers import OpTimingSerializer
from netsim.links import Medium
from pqcpslab.base_serializers import BaseReportSerializer, LabeledChoiceField

from .models import Layout, Statistic, Verdict

RECORDED_DELAY_COLUMNS = ('scheme', 'scenario', 'medium', 'kind', 'stat', 'value_us')


def _setting(name, default):
    return lambda: getattr(settings, name, default)


# ==================== INPUT SERIALIZERS ====================

class ScenarioConfigSerializer(serializers.Serializer):
    """Scenario config document; omitted keys fall back to settings"""
    id = serializers.ChoiceField(choices=[1, 2, 3, 4])
    variant = LabeledChoiceField(KemVariant)
    crypto_mode = LabeledChoiceField(BenchMode, default=BenchMode.INJECTED)
    runs = serializers.IntegerField(min_value=1, default=_setting('PQCPSLAB_RUNS', 5))
    seed = serializers.IntegerField(default=_setting('PQCPSLAB_SEED', 42))
    threshold_us = serializers.IntegerField(min_value=0, default=_setting('PQCPSLAB_THRESHOLD_US', 100_000))
    data_message_bytes = serializers.IntegerField(
        min_value=0, default=_setting('PQCPSLAB_DATA_MESSAGE_BYTES', 32)
    )
    initiator = serializers.ChoiceField(choices=['A', 'B'], default='A')

    def validate_id(self, value):
        if isinstance(value, bool):
            raise serializers.ValidationError(_("Scenario id must be an integer."))
        return int(value)


class RecordedDelaySerializer(serializers.Serializer):
    """One row of a recorded-delay CSV"""
    scheme = LabeledChoiceField(KemVariant)
    scenario = LabeledChoiceField(Layout)
    medium = LabeledChoiceField(Medium, aliases={'ADHOC LTE (C-V2X)': Medium.WIRELESS_ADHOC, 'LTE': Medium.WIRELESS_ADHOC})
    kind = LabeledChoiceField(MessageKind)
    stat = LabeledChoiceField(Statistic)
    value_us = serializers.FloatField(min_value=0)


# ==================== REPORT SERIALIZERS ====================

class KindStatsSerializer(BaseReportSerializer):
    max_us = serializers.FloatField()
    min_us = serializers.FloatField()
    avg_us = serializers.FloatField()


class ScenarioSerializer(BaseReportSerializer):
    id = serializers.IntegerField()
    scheme = serializers.SerializerMethodField()
    scenario = serializers.SerializerMethodField()
    medium = serializers.SerializerMethodField()
    node_a = serializers.SerializerMethodField()
    node_b = serializers.SerializerMethodField()
    crypto_mode = serializers.CharField()
    runs = serializers.IntegerField()
    data_message_bytes = serializers.IntegerField()
    initiator = serializers.CharField()

    def get_scheme(self, obj):
        return KemVariant(obj.variant).label

    def get_scenario(self, obj):
        return Layout(obj.layout).label

    def get_medium(self, obj):
        return Medium(obj.medium).label

    def get_node_a(self, obj):
        return obj.mobility_a.describe()

    def get_node_b(self, obj):
        return obj.mobility_b.describe()


class MetricsReportSerializer(BaseReportSerializer):
    """Simulated delay report; never carries the trace"""
    scenario = ScenarioSerializer()
    runs = serializers.IntegerField()
    seed = serializers.IntegerField(allow_null=True)
    delays = serializers.SerializerMethodField()
    handshake_completion_us = KindStatsSerializer()
    timings = OpTimingSerializer(many=True)

    def get_delays(self, obj):
        return {str(kind): KindStatsSerializer(obj.delays[kind]).data for kind in MessageKind.values}


class BudgetVerdictSerializer(BaseReportSerializer):
    scheme = serializers.SerializerMethodField()
    scenario = serializers.SerializerMethodField()
    medium = serializers.SerializerMethodField()
    kind = serializers.SerializerMethodField()
    observed_avg_us = serializers.FloatField()
    threshold_us = serializers.FloatField()
    verdict = serializers.ChoiceField(choices=Verdict.choices)

    def get_scheme(self, obj):
        return KemVariant(obj.scheme).label

    def get_scenario(self, obj):
        return Layout(obj.scenario).label

    def get_medium(self, obj):
        return Medium(obj.medium).label

    def get_kind(self, obj):
        return MessageKind(obj.kind).label
