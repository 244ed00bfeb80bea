# pqcpslab/exceptions.py
"""Exception hierarchy shared by every lab app."""


class LabError(Exception):
    """Base class for all lab failures"""


class InputError(LabError, ValueError):
    """Malformed seed, key, ciphertext or parameter"""


class ProtocolError(LabError):
    """Handshake message in the wrong phase, of the wrong kind or size"""


class SessionError(LabError):
    """Session cannot seal or open (not established, counter exhausted)"""


class AuthenticationError(SessionError):
    """AEAD tag did not verify"""


class ReplayError(SessionError):
    """Counter already seen or older than the last accepted one"""


class ConfigurationError(LabError):
    """Invalid scenario, simulation script or input file"""


class ModelError(ConfigurationError):
    """Dataflow model failed validation.

    ``errors`` is a list of ``{'path', 'line', 'message'}`` dicts.
    """

    def __init__(self, errors):
        self.errors = list(errors)
        summary = '; '.join(
            f"{e['path']} (line {e['line']}): {e['message']}" if e.get('line') else f"{e['path']}: {e['message']}"
            for e in self.errors
        )
        super().__init__(summary or 'invalid dataflow model')


class MitigationLookupError(LabError, KeyError):
    """Finding title or scheme name has no registry entry"""

    def __str__(self):
        return str(self.args[0]) if self.args else 'no registry entry'
