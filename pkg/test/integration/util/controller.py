import os
import subprocess
import sys

ROOT = os.path.abspath(os.path.join(os.path.dirname(__file__), "..", "..", ".."))
PROBLEMS = os.path.join(ROOT, "problems")
TESTDIR = os.path.abspath("testdir")


def problem(name):
    return os.path.join(PROBLEMS, name)


class CliController:
    """Runs the optimize.py launcher in a separate process"""

    def __init__(self, timeout=1800):
        self.timeout = timeout

    def call(self, *args):
        """(exit code, stdout, stderr) of one command"""
        proc = subprocess.run(
            [sys.executable, "optimize.py"] + [str(a) for a in args],
            cwd=ROOT,
            stdout=subprocess.PIPE,
            stderr=subprocess.PIPE,
            timeout=self.timeout,
        )
        return proc.returncode, proc.stdout.decode(), proc.stderr.decode()

    def outdir(self, name):
        path = os.path.join(TESTDIR, name)
        os.makedirs(path, exist_ok=True)
        return path


cli = CliController()
