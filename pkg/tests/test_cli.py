import subprocess
import sys

from mechspace import __version__


def test_cli_version():
    cmd = [sys.executable, "-m", "mechspace", "--version"]
    assert subprocess.check_output(cmd).decode().strip() == __version__
