"""
Shared plumbing for the lab commands: ``--config`` files, ``--record``
and translation of validation and lab errors into exit codes.
"""
import logging

from django.core.management.base import BaseCommand, CommandError

from load_env import read_key_values

from ..serializers import error_text

logger = logging.getLogger(__name__)

EXIT_BAD_INPUT = 1
EXIT_ABORTED = 2

TRUE_VALUES = {'1', 'true', 'yes', 'on'}


class LabCommand(BaseCommand):
    """
    Base for commands whose flags are validated by a DRF serializer.

    ``flags`` names every option that a ``--config`` file may set; keys
    are matched with or without leading dashes and with ``-`` or ``_``.
    Values on the command line win over the file.
    """
    serializer_class = None
    flags = ()
    boolean_flags = ('record',)
    recordable = False

    def add_arguments(self, parser):
        parser.add_argument('--config', help='Flat key=value file mirroring the flags')
        if self.recordable:
            parser.add_argument('--record', action='store_true', default=None,
                                help='Store the run in the database')
        self.add_lab_arguments(parser)

    def add_lab_arguments(self, parser):
        raise NotImplementedError

    def merged_options(self, options) -> dict:
        merged = {}
        if options.get('config'):
            merged.update(self.read_config(options['config']))
        merged.update({name: options[name] for name in self.all_flags() if options.get(name) is not None})
        for name in self.boolean_flags:
            value = merged.get(name)
            if isinstance(value, str):
                merged[name] = value.strip().lower() in TRUE_VALUES
        return merged

    def validate(self, merged: dict) -> dict:
        fields = self.serializer_class().fields
        serializer = self.serializer_class(data={key: value for key, value in merged.items() if key in fields})
        if not serializer.is_valid():
            message = error_text(serializer.errors)
            logger.error(f"{self.command_name()}: invalid input: {message}")
            raise CommandError(message, returncode=EXIT_BAD_INPUT)
        return serializer.validated_data

    def read_config(self, path) -> dict:
        try:
            raw = read_key_values(path)
        except (OSError, ValueError) as exc:
            raise CommandError(f"cannot read config file {path}: {exc}", returncode=EXIT_BAD_INPUT)
        known = set(self.all_flags())
        values = {}
        for key, value in raw.items():
            name = key.lstrip('-').replace('-', '_').lower()
            if name not in known:
                raise CommandError(f"unknown config key '{key}' in {path}", returncode=EXIT_BAD_INPUT)
            values[name] = value
        logger.debug(f"Read {len(values)} settings from {path}")
        return values

    def all_flags(self):
        return tuple(self.flags) + (('record',) if self.recordable else ())

    def command_name(self) -> str:
        return self.__module__.rsplit('.', 1)[-1]
