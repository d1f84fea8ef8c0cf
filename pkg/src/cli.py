import argparse

import consts
import errors
import helpers
import loggers
from commands.attention import ExportAttentionCommand
from commands.data import ConvertAnnotationsCommand, MakeHardCommand, StatsCommand, SyntheticCommand
from commands.evaluate import EvalCommand, PredictCommand
from commands.train import SweepCommand, TrainCommand


logger = loggers.getLogger(__name__)

COMMANDS = [
    TrainCommand,
    EvalCommand,
    PredictCommand,
    MakeHardCommand,
    ConvertAnnotationsCommand,
    ExportAttentionCommand,
    SyntheticCommand,
    StatsCommand,
    SweepCommand,
]


def option_name(field):
    return '--{}'.format(field.replace('_', '-'))


def build_parser():
    parser = argparse.ArgumentParser(
        prog='mil-acsa',
        description='Aspect-category sentiment analysis by attention-weighted word sentiment aggregation.')
    parser.add_argument('-v', '--verbose', action='store_true', help='log batch-level detail')
    subparsers = parser.add_subparsers(dest='command', metavar='command')
    for command in COMMANDS:
        sub = subparsers.add_parser(command.name, help=command.help, description=command.help)
        sub.add_argument('--config', help='flat "key = value" file; command-line options take precedence')
        for field in sorted(command.validator.fields):
            params = command.validator.fields[field]
            default = params.get('default')
            text = params.get('help') or ''
            if default is not None:
                text = '{} (default: {})'.format(text, default).strip()
            sub.add_argument(option_name(field), dest=field, default=None, metavar=field.upper(), help=text)
    return parser


def resolve_options(args, command):
    """Defaults < config file < command line; defaults are applied by the validator."""
    options = {}
    if args.config:
        if not helpers.check_file(args.config):
            raise errors.MissingFileError(args.config)
        options.update(helpers.read_key_values(args.config))
    for field in command.validator.fields:
        value = getattr(args, field, None)
        if value is not None:
            options[field] = value
    return options


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    loggers.setup(args.verbose)
    if not args.command:
        parser.print_help()
        return consts.EXIT_CONFIG
    command = {c.name: c for c in COMMANDS}[args.command]
    try:
        options = resolve_options(args, command)
    except errors.BaseError as exc:
        logger.error(exc.message)
        return exc.exit_code
    return command(options)()
