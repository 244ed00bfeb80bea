# threatmodel/serializers.py
from django.utils.translation import gettext_lazy as _
from rest_framework import serializers

from pqcpslab.base_serializers import BaseReportSerializer, LabeledChoiceField

from .models import BoundaryKind, ElementKind, FlowMedium, Priority, StrideCategory

FINDING_COLUMNS = ('title', 'category', 'interaction', 'priority', 'mitigation')


# ==================== MODEL DOCUMENT ====================

class ElementSerializer(serializers.Serializer):
    name = serializers.CharField(max_length=200)
    kind = LabeledChoiceField(ElementKind)


class AnnotationsSerializer(serializers.Serializer):
    auth_scheme = serializers.CharField(required=False, allow_null=True, default=None)
    integrity_hash = serializers.CharField(required=False, allow_null=True, default=None)
    replay_protected = serializers.BooleanField(default=True)
    identity_assertion = serializers.BooleanField(default=False)

    def validate(self, attrs):
        unknown = sorted(set(self.initial_data) - set(self.fields))
        if unknown:
            raise serializers.ValidationError(
                _("Unknown annotation(s): {names}").format(names=', '.join(unknown))
            )
        # JSON booleans only, not DRF's "yes" or 1
        flags = {
            name: _("Must be true or false.")
            for name in ('replay_protected', 'identity_assertion')
            if name in self.initial_data and not isinstance(self.initial_data[name], bool)
        }
        if flags:
            raise serializers.ValidationError(flags)
        return attrs


class FlowSerializer(serializers.Serializer):
    name = serializers.CharField(max_length=200)
    src = serializers.CharField()
    dst = serializers.CharField()
    medium = LabeledChoiceField(FlowMedium)


class BoundarySerializer(serializers.Serializer):
    name = serializers.CharField(max_length=200)
    kind = LabeledChoiceField(BoundaryKind)
    members = serializers.ListField(child=serializers.CharField(), default=list)
    crossed_flows = serializers.ListField(child=serializers.CharField(), default=list)


# ==================== FINDINGS ====================

class ThreatFindingSerializer(BaseReportSerializer):
    rule_id = serializers.CharField()
    title = serializers.CharField()
    category = serializers.SerializerMethodField()
    interaction = serializers.SerializerMethodField()
    priority = serializers.SerializerMethodField()
    flow = serializers.CharField()
    quantum_attack = serializers.CharField()
    impact = serializers.CharField()
    mitigation = serializers.CharField()

    def get_category(self, obj):
        return StrideCategory(obj.category).label

    def get_interaction(self, obj):
        return FlowMedium(obj.interaction).label

    def get_priority(self, obj):
        return Priority(obj.priority).label
