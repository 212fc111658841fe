"""
Shared plumbing for the shv commands: global flags, RunConfig, error to
exit-code translation and payload output.
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from django.conf import settings
from django.core.management.base import BaseCommand, CommandError

from services.errors import CheckFailure, DomainError
from services.poset_service import validate_parameters
from services.serialization import dumps, encode_value, render_text

logger = logging.getLogger(__name__)

EXIT_DOMAIN_ERROR = 2
EXIT_CHECK_FAILURE = 3


@dataclass
class RunConfig:
    command: str
    k: Optional[int] = None
    n: Optional[int] = None
    r: Optional[int] = None
    seed: int = 0
    budget: Optional[int] = None
    tolerances: dict = field(default_factory=dict)
    output: Optional[str] = None
    format: str = 'json'

    @classmethod
    def from_options(cls, command, options):
        return cls(
            command=command,
            k=options.get('k'),
            n=options.get('n'),
            r=options.get('r'),
            seed=settings.SHV_SEED if options.get('seed') is None else options['seed'],
            budget=options.get('budget'),
            tolerances={
                'newton': options.get('tol') or settings.SHV_NEWTON_TOL,
                'dedup': settings.SHV_DEDUP_RADIUS,
                'rank': settings.SHV_RANK_TOL,
            },
            output=options.get('out'),
            format=options.get('format') or 'json',
        )

    def validate_knr(self):
        validate_parameters(self.k, self.n, self.r)


class ShvCommand(BaseCommand):
    """Base for every shv command. Subclasses implement add_command_arguments and run."""

    def add_arguments(self, parser):
        parser.add_argument('--seed', type=int, default=None, help='Seed for every random draw (default: SHV_SEED).')
        parser.add_argument('--format', choices=['json', 'text'], default='json', help='Output format.')
        parser.add_argument('--out', default=None, help='Write the output to this file instead of stdout.')
        self.add_command_arguments(parser)

    def add_command_arguments(self, parser):
        pass

    @staticmethod
    def add_knr_arguments(parser, r=True):
        parser.add_argument('--k', type=int, required=True)
        parser.add_argument('--n', type=int, required=True)
        if r:
            parser.add_argument('--r', type=int, default=0)

    def run(self, config, options):
        raise NotImplementedError

    def failure(self, payload):
        """Message for a failed check found in the payload; None when everything passed."""
        return None

    def handle(self, *args, **options):
        config = RunConfig.from_options(self.command_name(), options)
        try:
            payload = self.run(config, options)
        except CheckFailure as e:
            logger.error(f'{config.command}: {e}')
            raise CommandError(str(e), returncode=EXIT_CHECK_FAILURE)
        except DomainError as e:
            raise CommandError(str(e), returncode=EXIT_DOMAIN_ERROR)
        self.emit(payload, config)
        message = self.failure(payload)
        if message:
            raise CommandError(message, returncode=EXIT_CHECK_FAILURE)

    def command_name(self):
        return self.__module__.rsplit('.', 1)[-1]

    def emit(self, payload, config):
        if config.format == 'json':
            text = dumps(payload)
        else:
            text = render_text(encode_value(payload))
        if config.output:
            Path(config.output).write_text(text + '\n')
            self.stdout.write(self.style.SUCCESS(f'✓ Wrote {config.command} output to {config.output}'))
        else:
            self.stdout.write(text)
