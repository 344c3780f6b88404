import io
import json
import re
import shlex
import subprocess
import sys
from pathlib import Path

import pytest

from hahnmeasure import cli
from hahnmeasure.exponents import QQ
from hahnmeasure.parser import parse_domain, parse_expr, parse_set

GALLERY = Path(__file__).resolve().parent.parent / "docs" / "gallery.md"
BLOCK = re.compile(r"```console\n\$ (?P<cmd>[^\n]*)\n(?P<out>.*?)```", re.S)


def gallery_blocks():
    return [(m["cmd"], m["out"]) for m in BLOCK.finditer(GALLERY.read_text())]


def run(argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.main(argv, out, err)
    return code, out.getvalue(), err.getvalue()


def test_gallery_is_not_empty():
    assert len(gallery_blocks()) >= 30


@pytest.mark.parametrize("cmd,expected", gallery_blocks(), ids=[c for c, _ in gallery_blocks()])
def test_gallery_output_is_exact(cmd, expected):
    words = shlex.split(cmd)
    assert words[0] == "hahnmeasure"
    code, out, err = run(words[1:])
    shown = out + err + (f"[exit {code}]\n" if code else "")
    assert shown == expected


def test_errors_go_to_stderr():
    code, out, err = run(["integrate", "1/x", "on", "[0, 1]"])
    assert code == cli.EXIT_DOMAIN and out == "" and err.startswith("DivergentIntegral")


def test_json_payload():
    code, out, _ = run(["--format", "json", "measure", "[0, t^(-1/2)]"])
    payload = json.loads(out)
    assert code == 0
    assert payload["schema"] == 1 and payload["command"] == "measure"
    assert payload["result"]["value"]["text"] == "t^(-1/2)"
    assert payload["result"]["degree"] == 0


def test_json_error_payload():
    code, out, err = run(["--format", "json", "integrate", "exp(-x)", "on", "[0, 1]"])
    assert code != 0
    payload = json.loads(out or err)
    assert "UnsupportedIntegrand" in json.dumps(payload)


def test_trailing_flag_after_domain():
    _, plain, _ = run(["integrate", "x*log(x)", "on", "[t, 1]"])
    _, checked, _ = run(["integrate", "x*log(x)", "on", "[t, 1]", "--check"])
    assert checked.startswith(plain) and "agree within 1e-06: yes" in checked


def test_console_script():
    proc = subprocess.run([sys.executable, "-m", "hahnmeasure", "measure", "[0, t^(-1/2)]"],
                          capture_output=True, text=True, check=True)
    assert proc.stdout == "t^(-1/2)\n"


SETS = ["[2, t^(-1/2)] u {5}", "[0, inf[", "]-inf, inf[", "[t, 2*t]", "]0, 1] u [3, t^(-1)["]
EXPRS = ["x*log(x)", "1/sqrt(1-x^2)", "abs(x)", "2/pi*arctan(s)",
         "piecewise(s < -1: 0, s < 0: s + 1, s < 1: 1 - s, 0)", "sqrt(x^2+1)", "x^2 + X"]


@pytest.mark.parametrize("text", SETS)
def test_set_text_round_trips(text):
    s = parse_set(text, QQ)
    assert parse_set(str(s), QQ) == s


@pytest.mark.parametrize("text", EXPRS)
def test_expression_text_round_trips(text):
    e = parse_expr(text, QQ)
    assert parse_expr(str(e), QQ).equals(e)


def test_region_text_round_trips():
    r = parse_domain("region x in [1, t^(-1)]; y in [0, 1/x]", QQ)
    again = parse_domain(str(r), QQ)
    assert str(again) == str(r)
