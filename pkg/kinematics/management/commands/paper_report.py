"""
Management command that regenerates every published number as a named check.
Run: shv paper-report
     shv paper-report --only sh_ --only p_3_7_1 --threads 2
     shv paper-report --format text --out report.txt
"""

from services.report_service import paper_report

from ._base import ShvCommand


class Command(ShvCommand):
    help = 'Run the reproduction checks and emit expected / computed / pass per check id (exit 3 if any fails)'

    def add_command_arguments(self, parser):
        parser.add_argument(
            '--only',
            action='append',
            help='Run only checks whose id starts with this prefix. Can be repeated.',
        )
        parser.add_argument('--threads', type=int, default=None, help='Worker threads (default: SHV_THREADS).')

    def run(self, config, options):
        report = paper_report(only=options.get('only'), threads=options.get('threads'))
        if config.format == 'text':
            for check_id, result in sorted(report.results.items()):
                style = self.style.SUCCESS if result.passed else self.style.ERROR
                self.stderr.write(style(f'  {"✓" if result.passed else "✗"} {check_id}'))
        return report

    def failure(self, payload):
        failures = payload.failures()
        if failures:
            return f'{len(failures)} check(s) failed: {", ".join(sorted(failures))}'
        return None
