import os
import shutil
import sys
import tempfile
import traceback
from contextlib import contextmanager

import consts
import errors
import helpers
from loggers import getLogger


logger = getLogger(__name__)


class CommandBase(object):
    """A command validates `options` with `validator`, runs, and maps the
    error family it raises to the process exit code."""

    name = None
    help = None
    validator = None

    def __init__(self, options=None, stdout=None):
        self.options = options or {}
        self.stdout = stdout or sys.stdout
        self.data = {}

    def run(self):
        raise NotImplementedError

    def write(self, line=''):
        self.stdout.write('{}\n'.format(line))

    @contextmanager
    def staging(self, output_dir):
        """Yields a scratch directory whose files move to `output_dir` only on success."""
        parent = os.path.dirname(os.path.abspath(output_dir))
        os.makedirs(parent, exist_ok=True)
        stage = tempfile.mkdtemp(prefix='.staging-', dir=parent)
        try:
            yield stage
        except BaseException:
            shutil.rmtree(stage, ignore_errors=True)
            raise
        os.makedirs(output_dir, exist_ok=True)
        for name in sorted(os.listdir(stage)):
            target = os.path.join(output_dir, name)
            if os.path.isdir(target):
                shutil.rmtree(target)
            os.replace(os.path.join(stage, name), target)
        shutil.rmtree(stage, ignore_errors=True)

    @contextmanager
    def staged_file(self, path):
        directory = os.path.dirname(os.path.abspath(path))
        os.makedirs(directory, exist_ok=True)
        fd, temp = tempfile.mkstemp(prefix='.staging-', dir=directory)
        os.close(fd)
        try:
            yield temp
        except BaseException:
            os.remove(temp)
            raise
        os.replace(temp, path)

    def echo_config(self, directory):
        path = os.path.join(directory, consts.CONFIG_ECHO)
        helpers.write_key_values(path, self.data)
        return path

    def __call__(self):
        try:
            self.run()
        except errors.BaseError as exc:
            logger.error(exc.message)
            return exc.exit_code
        except Exception:
            logger.critical(traceback.format_exc())
            return consts.EXIT_FAILURE
        return consts.EXIT_OK
