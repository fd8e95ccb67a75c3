#!/usr/bin/env python
"""
Smoke test script for the bickley command line.
Runs each subcommand through `python -m bickley` and checks exit codes and output.
"""

import json
import os
import subprocess
import sys
from dotenv import load_dotenv

# Load environment variables
load_dotenv()

PYTHON = os.getenv('BICKLEY_PYTHON', sys.executable)

failures = []


def run(*args):
    """Run the CLI and return (exit code, stdout, stderr)"""
    proc = subprocess.run([PYTHON, '-m', 'bickley', *args], capture_output=True, text=True)
    return proc.returncode, proc.stdout, proc.stderr


def check(label, ok, detail=''):
    if ok:
        print(f"✅ {label}")
    else:
        print(f"❌ {label}")
        if detail:
            print(detail)
        failures.append(label)


def test_eval():
    """K_0(1) through eval"""
    print("Testing eval...")
    code, out, err = run('eval', '--alpha', '0', '--x', '1')
    if code != 0:
        check("eval exit code", False, err)
        return
    value = json.loads(out)['rows'][0]['value']
    check(f"eval Ki_0(1) = {value!r}", abs(value - 0.42102443824070834) < 1e-10)

    code, out, err = run('eval', '--alpha', '1', '--x', '-1')
    check("eval rejects x <= 0 with exit 2", code == 2, err)


def test_table():
    print("\nTesting table...")
    code, out, err = run('table', '--alpha', '1', '--x-range', '0.5:1.5:0.5', '--format', 'csv')
    lines = out.strip().splitlines()
    check("table returns header and 3 rows", code == 0 and len(lines) == 4, err)


def test_verify():
    """Tiny grid, every suite"""
    print("\nTesting verify...")
    code, out, err = run('verify', '--suite', 'all', '--grid', 'tiny', '--workers', '2')
    if code == 0:
        rows = json.loads(out)['rows']
        check(f"verify tiny grid passed - {len(rows)} checks", True)
    else:
        check("verify tiny grid", False, out[-2000:] + err)

    code, out, err = run('verify', '--suite', 'nonexistent', '--grid', 'tiny')
    check("verify rejects unknown suite with exit 2", code == 2, err)


def test_gram():
    print("\nTesting gram...")
    code, out, err = run('gram', '--count', '10', '--max-n', '4')
    check("gram battery passed", code == 0, err)


def test_det():
    """Quadrature and Monte-Carlo oracles"""
    print("\nTesting det...")
    code, out, err = run('det', '--alpha', '2', '--n', '1', '--x-range', '0.5:2:0.5')
    check("det agrees with the double integral", code == 0, err)

    code, out, err = run('det', '--alpha', '4', '--n', '2', '--x', '1',
                         '--oracle', 'mc', '--samples', '200000')
    if code == 0:
        row = json.loads(out)['rows'][0]
        print(f"   det {row['det']:.6g}, Monte-Carlo {row['oracle']:.6g} +- {row['oracle_err']:.2g}")
    check("det agrees with Monte-Carlo", code == 0, err)


def test_determinism():
    """Same inputs give byte-identical output for any worker count"""
    print("\nTesting determinism...")
    verify = ('verify', '--suite', 'all', '--grid', 'tiny')
    _, single, _ = run(*verify, '--workers', '1')
    _, pooled, _ = run(*verify, '--workers', '4')
    check("verify output independent of workers", single and single == pooled)

    det = ('det', '--alpha', '2', '--n', '2', '--x', '1', '--oracle', 'mc',
           '--samples', '50000', '--seed', '42')
    _, single, _ = run(*det, '--workers', '1')
    _, pooled, _ = run(*det, '--workers', '3')
    check("Monte-Carlo output independent of workers", single and single == pooled)

    gram = ('gram', '--count', '5', '--max-n', '3', '--seed', '7')
    check("gram output repeatable", run(*gram)[1] == run(*gram)[1])


def main():
    """Run all tests"""
    print("=== Bickley CLI Smoke Tests ===")
    print(f"Interpreter: {PYTHON}")

    try:
        test_eval()
        test_table()
        test_verify()
        test_gram()
        test_det()
        test_determinism()
    except Exception as e:
        print(f"\n❌ Tests failed with error: {str(e)}")
        sys.exit(1)

    if failures:
        print(f"\n❌ {len(failures)} checks failed: {', '.join(failures)}")
        sys.exit(1)
    print("\n✅ All tests completed!")


if __name__ == "__main__":
    main()
