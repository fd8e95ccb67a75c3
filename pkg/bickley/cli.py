# bickley/cli.py
"""
Command-line interface for the Bickley function toolkit

Commands:
- eval:   one value Ki_alpha(x) with its error estimate
- table:  values over an (alpha, x) range
- verify: inequality sweep over a named grid
- gram:   seeded batteries of random Gram matrices
- det:    Hankel determinants against quadrature or Monte-Carlo oracles
- report: verify + gram + determinant triangle in one document

Output goes to standard output (or --out) as JSON (schema 1, sorted keys)
or CSV (17 significant digits); diagnostics go to standard error.

Exit codes:
- 0: success
- 2: usage, domain or configuration error
- 3: convergence failure
- 4: an asserted verification failed
"""

import io
import sys
import csv
import json
import logging
import argparse
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from .config import (
    Config,
    EvalConfig,
    McConfig,
    get_grid,
    get_eval_config_from_env,
    log_spaced,
)
from .determinants import (
    det_ki,
    det_oracle_2x2,
    det_oracle_mc,
    det_cm_probe,
    leading_minors,
)
from .engine import ki
from .harness import (
    KiEvaluator,
    VERDICT_TOL,
    GRAM_TOL,
    gram_psd_in_x,
    gram_psd_in_alpha,
    sweep,
)
from .models import (
    HankelSpec,
    McEstimate,
    BickleyConvergenceError,
)

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_CONVERGENCE = 3
EXIT_VERIFICATION = 4

QUAD_AGREEMENT_REL = 1e-8
MC_AGREEMENT_SE = 3.0
MC_MIN_ASSERTED_SAMPLES = 10_000

TRIANGLE_ALPHAS = (0.0, 2.0, 4.0)
TRIANGLE_XS = (0.5, 1.0, 2.0)


class VerificationFailed(Exception):
    """Carries a finished document whose asserted checks did not all pass."""

    def __init__(self, document: Dict[str, Any]):
        super().__init__("verification failed")
        self.document = document


# =============================================================================
# Argument helpers
# =============================================================================

def parse_range(text: str) -> List[float]:
    """
    Inclusive arithmetic range 'start:stop:step'.

    '1:1:1' is the single point 1; a zero or negative step is rejected
    unless start == stop.
    """
    parts = text.split(':')
    if len(parts) != 3:
        raise ValueError(f"Malformed range '{text}': expected start:stop:step")
    try:
        start, stop, step = (float(p) for p in parts)
    except ValueError:
        raise ValueError(f"Malformed range '{text}': non-numeric field")
    if start == stop:
        return [start]
    if not step > 0.0 or stop < start:
        raise ValueError(f"Malformed range '{text}': need start <= stop and step > 0")
    count = int(np.floor((stop - start) / step + 1e-9)) + 1
    return [start + i * step for i in range(count)]


def parse_log_range(text: str) -> List[float]:
    """Log-spaced range 'start:stop:n' with n points, start and stop > 0."""
    parts = text.split(':')
    if len(parts) != 3:
        raise ValueError(f"Malformed log range '{text}': expected start:stop:n")
    try:
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise ValueError(f"Malformed log range '{text}': non-numeric field")
    if not (start > 0.0 and stop > 0.0) or count < 1:
        raise ValueError(f"Malformed log range '{text}': need positive bounds and n >= 1")
    if count == 1:
        return [start]
    return log_spaced(start, stop, count)


def _x_values(args: argparse.Namespace) -> List[float]:
    if getattr(args, 'x_log_range', None):
        return parse_log_range(args.x_log_range)
    if getattr(args, 'x_range', None):
        return parse_range(args.x_range)
    if getattr(args, 'x', None) is not None:
        return [args.x]
    raise ValueError("one of --x, --x-range or --x-log-range is required")


def _eval_config(args: argparse.Namespace) -> EvalConfig:
    return get_eval_config_from_env(rel_tol=args.rel_tol, max_refinements=args.max_refinements)


def _mc_config(args: argparse.Namespace) -> McConfig:
    batch = args.batch if args.batch is not None else min(args.samples, McConfig.batch)
    return McConfig(samples=args.samples, seed=args.seed, batch=batch)


# =============================================================================
# Commands
# =============================================================================

def cmd_eval(args: argparse.Namespace) -> Dict[str, Any]:
    """Single value record."""
    cfg = _eval_config(args)
    value = ki(args.alpha, args.x, cfg)
    record = {
        'alpha': args.alpha,
        'x': args.x,
        'value': value.value,
        'abs_err_est': value.abs_err_est,
        'rel_tol_used': cfg.rel_tol,
    }
    return {
        'config': {'eval': cfg.to_dict()},
        'columns': list(record),
        'rows': [record],
    }


def cmd_table(args: argparse.Namespace) -> Dict[str, Any]:
    """Values over alpha-range x x-range, sorted by (alpha, x)."""
    cfg = _eval_config(args)
    if args.alpha_range:
        alphas = parse_range(args.alpha_range)
    elif args.alpha is not None:
        alphas = [args.alpha]
    else:
        raise ValueError("one of --alpha or --alpha-range is required")
    xs = _x_values(args)
    rows = []
    for alpha in sorted(alphas):
        for x in sorted(xs):
            value = ki(alpha, x, cfg)
            rows.append({'alpha': alpha, 'x': x, 'value': value.value, 'abs_err_est': value.abs_err_est})
    return {
        'config': {'eval': cfg.to_dict(), 'alpha_values': sorted(alphas), 'x_values': sorted(xs)},
        'columns': ['alpha', 'x', 'value', 'abs_err_est'],
        'rows': rows,
    }


def _verify_document(args: argparse.Namespace, cfg: EvalConfig, ev: Optional[KiEvaluator] = None) -> Dict[str, Any]:
    grid = get_grid(args.grid)
    names = [n for n in args.suite.split(',')]
    report = sweep(grid, names, tol=args.tol, cfg=cfg, workers=args.workers,
                   cache=ev.cache if ev is not None else None)
    rows = [{
        'name': entry.name,
        'count': entry.count,
        'asserted': entry.asserted,
        'min_margin': entry.min_margin,
        'min_slack': entry.min_slack,
        'failures': len(entry.failures),
        'report_only_violations': entry.report_only_violations,
    } for entry in (report.entries[k] for k in sorted(report.entries))]
    return {
        'config': {'eval': cfg.to_dict(), 'grid': grid.to_dict(), 'suite': args.suite,
                   'tol': args.tol},
        'report': report.to_dict(),
        'columns': list(rows[0]) if rows else ['name'],
        'rows': rows,
        'passed': report.passed,
    }


def cmd_verify(args: argparse.Namespace) -> Dict[str, Any]:
    """Inequality sweep; exit 4 iff an asserted check failed."""
    doc = _verify_document(args, _eval_config(args))
    if not doc['passed']:
        raise VerificationFailed(doc)
    return doc


def _gram_battery(count: int, max_n: int, seed: int, tol: float,
                  ev: KiEvaluator) -> Dict[str, Any]:
    """
    Random Gram matrices in both modes.

    x-mode: alpha in [0.5, 5], points in [0.2, 3];
    alpha-mode: x in [0.2, 3], orders in [-3, 3].
    """
    rng = np.random.Generator(np.random.PCG64(seed))
    rows = []
    for i in range(count):
        n = int(rng.integers(1, max_n + 1))
        alpha = float(rng.uniform(0.5, 5.0))
        points = sorted(float(p) for p in rng.uniform(0.2, 3.0, n))
        v = gram_psd_in_x(alpha, points, tol=tol, ev=ev)
        rows.append({'mode': 'x', 'index': i, 'n': n, 'min_eigenvalue': v.min_eigenvalue,
                     'trace': v.trace, 'margin': v.margin, 'holds': v.holds})
    for i in range(count):
        n = int(rng.integers(1, max_n + 1))
        x = float(rng.uniform(0.2, 3.0))
        alphas = sorted(float(a) for a in rng.uniform(-3.0, 3.0, n))
        v = gram_psd_in_alpha(x, alphas, tol=tol, ev=ev)
        rows.append({'mode': 'alpha', 'index': i, 'n': n, 'min_eigenvalue': v.min_eigenvalue,
                     'trace': v.trace, 'margin': v.margin, 'holds': v.holds})
    failures = [r for r in rows if not r['holds']]
    return {
        'config': {'count': count, 'max_n': max_n, 'seed': seed, 'tol': tol},
        'columns': ['mode', 'index', 'n', 'min_eigenvalue', 'trace', 'margin', 'holds'],
        'rows': rows,
        'failure_count': len(failures),
        'passed': not failures,
    }


def cmd_gram(args: argparse.Namespace) -> Dict[str, Any]:
    """Gram battery; exit 4 iff a matrix has lambda_min < -tol * trace - budget."""
    cfg = _eval_config(args)
    doc = _gram_battery(args.count, args.max_n, args.seed, args.gram_tol, KiEvaluator(cfg))
    doc['config']['eval'] = cfg.to_dict()
    if not doc['passed']:
        raise VerificationFailed(doc)
    return doc


def _compare(det, oracle, kind: str) -> Dict[str, Any]:
    discrepancy = oracle.value - det.value
    if kind == 'mc':
        allowed = MC_AGREEMENT_SE * oracle.abs_err_est + det.abs_err_est
        asserted = oracle.samples >= MC_MIN_ASSERTED_SAMPLES
    else:
        allowed = max(QUAD_AGREEMENT_REL * abs(det.value), det.abs_err_est + oracle.abs_err_est)
        asserted = True
    return {
        'oracle': oracle.value,
        'oracle_err': oracle.abs_err_est,
        'discrepancy': discrepancy,
        'allowed': allowed,
        'agrees': abs(discrepancy) <= allowed,
        'asserted': asserted,
    }


def _det_rows(alpha: float, n: int, xs: Sequence[float], oracle: str,
              cfg: EvalConfig, mc: McConfig, workers: int) -> List[Dict[str, Any]]:
    rows = []
    for x in xs:
        spec = HankelSpec(alpha=alpha, n=n, x=x)
        det = det_ki(spec, cfg)
        row: Dict[str, Any] = {'alpha': alpha, 'n': n, 'x': x, 'oracle_kind': oracle,
                               'det': det.value, 'det_err': det.abs_err_est}
        if n == 0:
            value = ki(alpha, x, cfg)
            row.update(_compare(det, value, 'quad'))
            row['oracle_kind'] = 'eval'
        elif oracle == 'quad':
            if n != 1:
                raise ValueError(f"the quadrature oracle covers n = 1 only, got n={n}; use --oracle mc")
            row.update(_compare(det, det_oracle_2x2(alpha, x, cfg), 'quad'))
        else:
            estimate: McEstimate = det_oracle_mc(spec, mc, workers=workers)
            row.update(_compare(det, estimate, 'mc'))
            row['samples'] = estimate.samples
            row['acceptance_rate'] = estimate.acceptance_rate
            row['variance_exploded'] = estimate.variance_exploded
        row['leading_minors'] = [m.value for m in leading_minors(spec, cfg)]
        rows.append(row)
    return rows


DET_COLUMNS = ['alpha', 'n', 'x', 'oracle_kind', 'det', 'det_err', 'oracle', 'oracle_err',
               'discrepancy', 'allowed', 'agrees', 'asserted']


def cmd_det(args: argparse.Namespace) -> Dict[str, Any]:
    """Determinants vs oracle plus the complete-monotonicity probe on arithmetic grids."""
    cfg = _eval_config(args)
    mc = _mc_config(args)
    xs = sorted(_x_values(args))
    rows = _det_rows(args.alpha, args.n, xs, args.oracle, cfg, mc, args.workers)

    probe = None
    if len(xs) > 1 and not args.x_log_range:
        probe = det_cm_probe(args.alpha, args.n, xs, order=args.cm_order, cfg=cfg).to_dict()

    failed = [r for r in rows if r['asserted'] and not r['agrees']]
    passed = not failed and (probe is None or probe['holds'])
    doc = {
        'config': {'eval': cfg.to_dict(), 'mc': mc.to_dict(), 'alpha': args.alpha, 'n': args.n,
                   'x_values': xs, 'oracle': args.oracle, 'cm_order': args.cm_order},
        'columns': DET_COLUMNS,
        'rows': rows,
        'cm_probe': probe,
        'passed': passed,
    }
    if not passed:
        raise VerificationFailed(doc)
    return doc


def cmd_report(args: argparse.Namespace) -> Dict[str, Any]:
    """Full verification document: sweep, Gram battery and determinant triangle."""
    cfg = _eval_config(args)
    mc = _mc_config(args)
    ev = KiEvaluator(cfg)
    verify = _verify_document(args, cfg, ev)
    gram = _gram_battery(args.count, args.max_n, args.seed, args.gram_tol, ev)
    triangle = []
    for alpha in TRIANGLE_ALPHAS:
        triangle += _det_rows(alpha, 1, list(TRIANGLE_XS), args.oracle, cfg, mc, args.workers)
    det_passed = all(r['agrees'] for r in triangle if r['asserted'])
    rows = [
        {'section': 'verify', 'passed': verify['passed']},
        {'section': 'gram', 'passed': gram['passed']},
        {'section': 'det', 'passed': det_passed},
    ]
    doc = {
        'config': {'eval': cfg.to_dict(), 'mc': mc.to_dict(), 'oracle': args.oracle},
        'verify': {k: verify[k] for k in ('config', 'report')},
        'gram': {k: gram[k] for k in ('config', 'failure_count', 'passed')},
        'det': triangle,
        'columns': ['section', 'passed'],
        'rows': rows,
        'passed': all(r['passed'] for r in rows),
    }
    if not doc['passed']:
        raise VerificationFailed(doc)
    return doc


def handle_command(command: str, args: argparse.Namespace) -> Dict[str, Any]:
    """Dispatch a parsed command to its handler."""
    command_handlers = {
        "eval": cmd_eval,
        "table": cmd_table,
        "verify": cmd_verify,
        "gram": cmd_gram,
        "det": cmd_det,
        "report": cmd_report,
    }

    if command not in command_handlers:
        raise ValueError(f"Unknown command: {command}. Available: {list(command_handlers.keys())}")

    return command_handlers[command](args)


# =============================================================================
# Output
# =============================================================================

def _csv_cell(value: Any) -> str:
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, float):
        return format(value, '.17g')
    if value is None:
        return ''
    if isinstance(value, (list, dict)):
        return json.dumps(value, sort_keys=True)
    return str(value)


def render(document: Dict[str, Any], fmt: str) -> str:
    """JSON document or CSV of its rows."""
    if fmt == 'json':
        return json.dumps(document, sort_keys=True, indent=2, allow_nan=False) + '\n'
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    columns = document.get('columns', [])
    writer.writerow(columns)
    for row in document.get('rows', []):
        writer.writerow([_csv_cell(row.get(c)) for c in columns])
    return buffer.getvalue()


def _emit(text: str, out: Optional[str]):
    if out:
        with open(out, 'w', encoding='utf-8', newline='') as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def _sanitize(value: Any) -> Any:
    """Replace non-finite floats by strings so JSON output stays strict."""
    if isinstance(value, float) and not np.isfinite(value):
        return repr(value)
    if isinstance(value, dict):
        return {k: _sanitize(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_sanitize(v) for v in value]
    return value


# =============================================================================
# Parser
# =============================================================================

def _add_common(p: argparse.ArgumentParser):
    p.add_argument('--rel-tol', type=float, default=None, help='quadrature relative tolerance')
    p.add_argument('--max-refinements', type=int, default=None, help='quadrature level limit')
    p.add_argument('--format', choices=['json', 'csv'], default='json')
    p.add_argument('--out', default=None, help='write output to PATH instead of standard output')
    p.add_argument('--log-level', default=Config.LOG_LEVEL,
                   choices=['DEBUG', 'INFO', 'WARNING', 'ERROR'])
    p.add_argument('--workers', type=int, default=Config.WORKERS)


def _add_x(p: argparse.ArgumentParser):
    p.add_argument('--x', type=float, default=None)
    p.add_argument('--x-range', default=None, help='start:stop:step, inclusive')
    p.add_argument('--x-log-range', default=None, help='start:stop:n, log-spaced')


def _add_mc(p: argparse.ArgumentParser):
    p.add_argument('--oracle', choices=['quad', 'mc'], default='quad')
    p.add_argument('--samples', type=int, default=McConfig.samples)
    p.add_argument('--seed', type=int, default=McConfig.seed)
    p.add_argument('--batch', type=int, default=None, help='Monte-Carlo samples per batch')


def _add_verify(p: argparse.ArgumentParser):
    p.add_argument('--suite', default='all', help="comma-separated suite names or 'all'")
    p.add_argument('--grid', choices=['tiny', 'default', 'dense'], default=Config.GRID)
    p.add_argument('--tol', type=float, default=VERDICT_TOL, help='verdict tolerance')


def _add_gram(p: argparse.ArgumentParser, seed: bool = True):
    p.add_argument('--count', type=int, default=200, help='matrices per mode')
    p.add_argument('--max-n', type=int, default=5)
    p.add_argument('--gram-tol', type=float, default=GRAM_TOL)
    if seed:
        p.add_argument('--seed', type=int, default=McConfig.seed)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='bickley',
        description='Bickley function Ki_alpha(x): evaluation, bounds and inequality verification',
    )
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('eval', help='evaluate Ki_alpha(x)')
    p.add_argument('--alpha', type=float, required=True)
    p.add_argument('--x', type=float, required=True)
    _add_common(p)

    p = sub.add_parser('table', help='tabulate Ki over ranges')
    p.add_argument('--alpha', type=float, default=None)
    p.add_argument('--alpha-range', default=None, help='start:stop:step, inclusive')
    _add_x(p)
    _add_common(p)

    p = sub.add_parser('verify', help='run inequality suites over a grid')
    _add_verify(p)
    _add_common(p)

    p = sub.add_parser('gram', help='random Gram-matrix positivity battery')
    _add_gram(p)
    _add_common(p)

    p = sub.add_parser('det', help='Hankel determinants against oracles')
    p.add_argument('--alpha', type=float, required=True)
    p.add_argument('--n', type=int, default=1)
    p.add_argument('--cm-order', type=int, default=2)
    _add_x(p)
    _add_mc(p)
    _add_common(p)

    p = sub.add_parser('report', help='verify, gram and determinant triangle together')
    _add_verify(p)
    _add_gram(p, seed=False)
    _add_mc(p)
    _add_common(p)

    return parser


def setup_logging(level: str):
    logging.basicConfig(
        stream=sys.stderr,
        level=getattr(logging, level.upper(), logging.WARNING),
        format='%(asctime)s %(name)s %(levelname)s %(message)s',
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logging(args.log_level)

    try:
        document = handle_command(args.command, args)
        code = EXIT_OK
    except VerificationFailed as e:
        document = e.document
        code = EXIT_VERIFICATION
        logger.error(f"{args.command}: asserted checks failed")
    except BickleyConvergenceError as e:
        print(f"bickley {args.command}: {e}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except ValueError as e:
        # domain, configuration and usage errors
        print(f"bickley {args.command}: {e}", file=sys.stderr)
        return EXIT_USAGE

    document = {'schema': SCHEMA_VERSION, 'command': args.command, **document}
    try:
        _emit(render(_sanitize(document), args.format), args.out)
    except OSError as e:
        print(f"bickley {args.command}: cannot write output: {e}", file=sys.stderr)
        return EXIT_USAGE
    return code


if __name__ == '__main__':
    sys.exit(main())
