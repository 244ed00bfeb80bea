# threatmodel/dataflow.py
"""Dataflow models: elements, flows with crypto annotations and trust boundaries.

Models are JSON documents with top-level ``elements``, ``flows`` and
``boundaries`` arrays. Validation collects every problem before failing so
a model author sees all of them at once.
"""
import json
import json.decoder
import json.scanner
import logging
from dataclasses import dataclass, field
from pathlib import Path

from django.utils.translation import gettext_lazy as _

from pqcpslab.base_serializers import flatten_errors
from pqcpslab.exceptions import ModelError

from .models import BoundaryKind
from .serializers import AnnotationsSerializer, BoundarySerializer, ElementSerializer, FlowSerializer

logger = logging.getLogger(__name__)

BUNDLED_ETC_MODEL = Path(__file__).resolve().parent / 'data' / 'etc_model.json'


@dataclass(frozen=True)
class Element:
    name: str
    kind: str


@dataclass(frozen=True)
class Annotations:
    auth_scheme: str = None
    integrity_hash: str = None
    replay_protected: bool = True
    identity_assertion: bool = False


@dataclass(frozen=True)
class Flow:
    name: str
    src: str
    dst: str
    medium: str
    annotations: Annotations = field(default_factory=Annotations)


@dataclass(frozen=True)
class Boundary:
    name: str
    kind: str
    members: tuple = ()
    crossed_flows: tuple = ()

    def crosses(self, flow):
        """Listed as crossing, or exactly one endpoint inside the perimeter"""
        if flow.name in self.crossed_flows:
            return True
        return (flow.src in self.members) != (flow.dst in self.members)


@dataclass(frozen=True)
class DataflowModel:
    elements: tuple = ()
    flows: tuple = ()
    boundaries: tuple = ()

    def element(self, name):
        return next(e for e in self.elements if e.name == name)

    def crosses_trust_border(self, flow):
        return any(b.kind == BoundaryKind.TRUST_BORDER and b.crosses(flow) for b in self.boundaries)

    def with_flow(self, flow):
        return DataflowModel(self.elements, (*self.flows, flow), self.boundaries)


# ==================== JSON WITH LINE NUMBERS ====================

class _LocatedDict(dict):
    """JSON object that remembers the line of its opening brace"""
    line = None


def _located_decoder():
    decoder = json.JSONDecoder()

    def parse_object(s_and_end, *args, **kwargs):
        text, end = s_and_end
        obj, new_end = json.decoder.JSONObject(s_and_end, *args, **kwargs)
        located = _LocatedDict(obj)
        located.line = text.count('\n', 0, end) + 1
        return located, new_end

    decoder.parse_object = parse_object
    decoder.scan_once = json.scanner.py_make_scanner(decoder)
    return decoder


def _line_of(value):
    return getattr(value, 'line', None)


# ==================== PARSING ====================

class _ModelParser:

    def __init__(self, document):
        self.document = document
        self.errors = []

    def error(self, path, message, line=None):
        self.errors.append({'path': path, 'line': line, 'message': str(message)})

    def section(self, key):
        items = self.document.get(key, [])
        if not isinstance(items, list):
            self.error(key, _("Expected a list."), _line_of(self.document))
            return []
        return items

    def validate(self, serializer_class, item, path):
        serializer = serializer_class(data=item)
        if serializer.is_valid():
            return serializer.validated_data
        for field_path, message in flatten_errors(serializer.errors):
            if field_path == 'non_field_errors':
                field_path = ''
            self.error(f"{path}.{field_path}" if field_path else path, message, _line_of(item))
        return None

    def parse(self):
        if not isinstance(self.document, dict):
            self.error('$', _("A model must be a JSON object."), 1)
            return None
        for key in sorted(set(self.document) - {'elements', 'flows', 'boundaries'}):
            self.error(key, _("Unknown top-level key."), _line_of(self.document))

        elements = self.parse_elements()
        flows = self.parse_flows({e.name for e in elements})
        boundaries = self.parse_boundaries({e.name for e in elements}, {f.name for f in flows})
        if self.errors:
            return None
        return DataflowModel(tuple(elements), tuple(flows), tuple(boundaries))

    def parse_elements(self):
        elements, seen = [], set()
        for index, item in enumerate(self.section('elements')):
            path = f"elements[{index}]"
            data = self.validate(ElementSerializer, item, path)
            if data is None:
                continue
            if data['name'] in seen:
                self.error(f"{path}.name", _("Duplicate element name: {name}").format(name=data['name']),
                           _line_of(item))
                continue
            seen.add(data['name'])
            elements.append(Element(**data))
        return elements

    def parse_flows(self, element_names):
        flows, seen = [], set()
        for index, item in enumerate(self.section('flows')):
            path = f"flows[{index}]"
            data = self.validate(FlowSerializer, item, path)
            if data is None:
                continue
            raw_annotations = item.get('annotations', {})
            annotations = self.validate(AnnotationsSerializer, raw_annotations, f"{path}.annotations")
            problems = False
            for end in ('src', 'dst'):
                if data[end] not in element_names:
                    self.error(f"{path}.{end}", _("Unknown element: {name}").format(name=data[end]), _line_of(item))
                    problems = True
            if data['name'] in seen:
                self.error(f"{path}.name", _("Duplicate flow name: {name}").format(name=data['name']),
                           _line_of(item))
                problems = True
            seen.add(data['name'])
            if annotations is None or problems:
                continue
            flows.append(Flow(annotations=Annotations(**annotations), **data))
        return flows

    def parse_boundaries(self, element_names, flow_names):
        boundaries, seen = [], set()
        for index, item in enumerate(self.section('boundaries')):
            path = f"boundaries[{index}]"
            data = self.validate(BoundarySerializer, item, path)
            if data is None:
                continue
            problems = False
            for name in data['members']:
                if name not in element_names:
                    self.error(f"{path}.members", _("Unknown element: {name}").format(name=name), _line_of(item))
                    problems = True
            for name in data['crossed_flows']:
                if name not in flow_names:
                    self.error(f"{path}.crossed_flows", _("Unknown flow: {name}").format(name=name), _line_of(item))
                    problems = True
            if data['name'] in seen:
                self.error(f"{path}.name", _("Duplicate boundary name: {name}").format(name=data['name']),
                           _line_of(item))
                problems = True
            seen.add(data['name'])
            if not problems:
                boundaries.append(Boundary(
                    name=data['name'], kind=data['kind'],
                    members=tuple(data['members']), crossed_flows=tuple(data['crossed_flows']),
                ))
        return boundaries


def parse_model(text):
    """Parse and validate a dataflow model document.

    Raises ModelError listing every problem with its JSON path and line.
    """
    try:
        document = _located_decoder().decode(text)
    except json.JSONDecodeError as e:
        raise ModelError([{'path': '$', 'line': e.lineno, 'message': e.msg}])
    parser = _ModelParser(document)
    model = parser.parse()
    if parser.errors:
        logger.warning(f"Dataflow model rejected with {len(parser.errors)} error(s)")
        raise ModelError(parser.errors)
    logger.info(f"Parsed dataflow model: {len(model.elements)} elements, {len(model.flows)} flows")
    return model


def load_model(path):
    try:
        text = Path(path).read_text(encoding='utf-8')
    except OSError as e:
        raise ModelError([{'path': str(path), 'line': None, 'message': str(e)}])
    return parse_model(text)


def bundled_etc_model():
    """Electronic toll collection model shipped with the lab"""
    return load_model(BUNDLED_ETC_MODEL)
