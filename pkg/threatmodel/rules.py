# threatmodel/rules.py
"""STRIDE-per-interaction and quantum-vulnerability rules.

Each rule looks at one flow at a time. Findings come out ordered by rule id
and then by flow declaration order, so the output only depends on the model.
"""
import logging
from dataclasses import dataclass

from .models import FlowMedium, Priority, StrideCategory
from .registry import (
    COLLISION_ATTACKS, IMPACT_REGISTRY, IMPERSONATION, REPLAY_ATTACKS, WEAK_AUTHENTICATION, execution_flow_title,
    mitigation_for, rce_title,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ThreatFinding:
    rule_id: str
    title: str
    category: str
    interaction: str
    priority: str
    flow: str
    quantum_attack: str
    impact: str
    mitigation: str


# ==================== RULES ====================
# Each rule returns (title, category) for a flow, or None.

def remote_code_execution(model, flow):
    return rce_title(flow.dst), StrideCategory.ELEVATION_OF_PRIVILEGE


def execution_flow(model, flow):
    return execution_flow_title(flow.dst), StrideCategory.ELEVATION_OF_PRIVILEGE


def weak_authentication(model, flow):
    if flow.medium == FlowMedium.WIRED and IMPACT_REGISTRY.is_broken(flow.annotations.auth_scheme):
        return WEAK_AUTHENTICATION, StrideCategory.INFORMATION_DISCLOSURE
    return None


def collision(model, flow):
    if IMPACT_REGISTRY.is_hash(flow.annotations.integrity_hash):
        return COLLISION_ATTACKS, StrideCategory.TAMPERING
    return None


def replay(model, flow):
    if not flow.annotations.replay_protected:
        return REPLAY_ATTACKS, StrideCategory.TAMPERING
    return None


def impersonation(model, flow):
    if flow.annotations.identity_assertion and model.crosses_trust_border(flow):
        return IMPERSONATION, StrideCategory.ELEVATION_OF_PRIVILEGE
    return None


RULES = (
    ('R1', remote_code_execution),
    ('R2', execution_flow),
    ('R3', weak_authentication),
    ('R4', collision),
    ('R5', replay),
    ('R6', impersonation),
)


def analyze(model):
    """Run every rule over every flow; one finding per (rule, title, interaction)"""
    findings = []
    seen = set()
    for rule_id, rule in RULES:
        for flow in model.flows:
            hit = rule(model, flow)
            if hit is None:
                continue
            title, category = hit
            key = (rule_id, title, flow.medium)
            if key in seen:
                continue
            seen.add(key)
            entry = mitigation_for(title)
            findings.append(ThreatFinding(
                rule_id=rule_id, title=title, category=category, interaction=flow.medium,
                priority=Priority.HIGH, flow=flow.name,
                quantum_attack=entry.quantum_attack, impact=entry.impact, mitigation=entry.mitigation,
            ))
    logger.info(f"Analysis produced {len(findings)} finding(s) over {len(model.flows)} flow(s)")
    return findings
