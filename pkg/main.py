#!/usr/bin/env python3
"""
PolyStab - command line front end
Robust D-stability checks for polytopic and interval polynomial matrices

Subcommands:
    check       critical-subset check of a family file
    oracle      Monte Carlo falsification of the same family
    compare     both, with an agreement classification (single file or --batch)
    enumerate   critical families as JSON lines plus their count
    valueset    det values over the boundary sweep as CSV
"""

import argparse
import csv
import json
import logging
import sys
import time
from pathlib import Path

import config
import critical_set as cs
import region as reg
import robust_helpers as helpers
from checker import (
    CheckerConfig, INCONCLUSIVE, STABLE, UNSTABLE,
    boundary_margin, confirm_witness, family_stable, family_sweep_limit,
    monte_carlo_oracle, value_set_sweep,
)
from errors import CapacityError, DomainError, FamilyFileError, NumericalError, ParameterError
from family_file import load_family

logger = logging.getLogger(__name__)

# Mismatches whose sampled boundary margin falls below this multiple of the
# exclusion margin are classified as marginal
MARGINAL_BAND = 10.0


def setup_logging(quiet=False):
    """Configure the root logger from LOGGING_CONFIG"""
    handlers = [logging.StreamHandler(sys.stderr)]
    if config.LOGGING_CONFIG['log_to_file']:
        handlers.append(logging.FileHandler(config.LOGGING_CONFIG['log_file']))
    level = logging.ERROR if quiet else getattr(logging, config.LOGGING_CONFIG['level'])
    logging.basicConfig(
        level=level,
        format=config.LOGGING_CONFIG['format'],
        handlers=handlers,
        force=True,
    )


def status(args, message):
    """Short human status line on stderr"""
    if not args.quiet:
        print(message, file=sys.stderr)


# ============================================================================
# INPUT
# ============================================================================

def load_inputs(path, args):
    """
    Family, region and checker configuration with precedence
    defaults < file "config" block < command line flags
    """
    family, file_region, settings = load_family(path)
    region = reg.parse_region(args.region) if args.region else (
        file_region or reg.parse_region(config.REGION_CONFIG['default'])
    )
    cfg = CheckerConfig.from_mapping(settings).replace(
        seed=args.seed,
        boundary_count=args.boundary_count,
        max_depth=args.max_depth,
        exclusion_margin=args.tol,
        budget=args.budget,
        workers=args.workers,
        oracle_samples=getattr(args, 'samples', None),
    )
    return family, region, cfg


def write_output(args, text):
    if args.out:
        Path(args.out).write_text(text, encoding='utf-8')
    else:
        sys.stdout.write(text)


def write_report(args, report, started):
    if args.timing:
        report.setdefault('diagnostics', {})['wall_time_s'] = round(time.perf_counter() - started, 6)
    write_output(args, json.dumps(report, indent=config.CLI_CONFIG['json_indent'], sort_keys=True) + '\n')
    return report['exit_code']


def witness_dict(family, witness, region, cfg):
    data = witness.to_dict()
    data['confirmed'] = confirm_witness(family, witness, region, cfg)
    return data


# ============================================================================
# SUBCOMMANDS
# ============================================================================

def run_check(family, region, cfg):
    """(verdict status, report fields) of the critical-subset check"""
    try:
        verdict = family_stable(family, region, cfg)
    except CapacityError as e:
        return INCONCLUSIVE, {
            'label': f"inconclusive: {e}",
            'diagnostics': {'critical_count': e.count, 'budget': cfg.budget},
        }
    except NumericalError as e:
        return INCONCLUSIVE, {'label': f"inconclusive: {e}", 'diagnostics': {}}

    fields = {'label': verdict.label, 'diagnostics': verdict.diagnostics}
    if verdict.status == UNSTABLE:
        fields['witness'] = witness_dict(family, verdict.witness, region, cfg)
    return verdict.status, fields


def cmd_check(args):
    started = time.perf_counter()
    family, region, cfg = load_inputs(args.family, args)
    status(args, f"Checking {family.n}x{family.n} {family.kind} family on {reg.region_name(region)}")
    result, fields = run_check(family, region, cfg)
    mark = '✓' if result == STABLE else '✗'
    status(args, f"{mark} {fields['label']}")
    report = helpers.stability_report(
        'check', result, fields['label'], fields['diagnostics'], cfg.to_dict(),
        witness=fields.get('witness'),
        extra={'region': reg.region_name(region), 'family': args.family},
    )
    return write_report(args, report, started)


def cmd_oracle(args):
    started = time.perf_counter()
    family, region, cfg = load_inputs(args.family, args)
    status(args, f"Sampling {cfg.oracle_samples} members of {args.family}")
    verdict = monte_carlo_oracle(family, region, cfg)
    witness = witness_dict(family, verdict.witness, region, cfg) if verdict.witness else None
    status(args, f"{'✓' if verdict.is_stable else '✗'} {verdict.label}")
    report = helpers.stability_report(
        'oracle', verdict.status, verdict.label, verdict.diagnostics, cfg.to_dict(),
        witness=witness,
        extra={'region': reg.region_name(region), 'family': args.family},
    )
    return write_report(args, report, started)


def classify(family, region, cfg, check_status, check_fields, oracle):
    """Agreement class of one check/oracle pair"""
    if check_status == oracle.status:
        return 'agreement', None
    if check_status == INCONCLUSIVE:
        return 'inconclusive', None
    if oracle.witness is not None and oracle.witness.marginal:
        return 'marginal', None
    margin = boundary_margin(family, region, cfg)
    if margin < MARGINAL_BAND * cfg.exclusion_margin:
        return 'marginal', margin
    if check_status == UNSTABLE and check_fields['witness']['confirmed']:
        # the oracle is one-sided; a confirmed witness is a sampling miss
        return 'oracle_miss', margin
    return 'disagreement', margin


def compare_one(path, args):
    family, region, cfg = load_inputs(path, args)
    check_status, check_fields = run_check(family, region, cfg)
    oracle = monte_carlo_oracle(family, region, cfg)
    kind, margin = classify(family, region, cfg, check_status, check_fields, oracle)
    entry = {
        'family': str(path),
        'region': reg.region_name(region),
        'check': check_status,
        'oracle': oracle.status,
        'classification': kind,
    }
    if margin is not None:
        entry['boundary_margin'] = margin
    return entry, cfg


COMPARE_STATUS = {'STABLE': 'agreement', 'UNSTABLE': 'disagreement', 'INCONCLUSIVE': 'inconclusive'}


def compare_exit(tally):
    if tally.get('disagreement', 0):
        return 'UNSTABLE'
    if tally.get('inconclusive', 0):
        return 'INCONCLUSIVE'
    return 'STABLE'


def cmd_compare(args):
    started = time.perf_counter()
    if args.batch:
        paths = sorted(Path(args.batch).glob(config.CLI_CONFIG['batch_glob']))
        if not paths:
            raise FamilyFileError(f"no family files matching {config.CLI_CONFIG['batch_glob']} in {args.batch}")
    elif args.family:
        paths = [Path(args.family)]
    else:
        raise ParameterError("compare needs a family file or --batch DIR")

    results = []
    tally = {}
    cfg = None
    for path in paths:
        try:
            entry, cfg = compare_one(path, args)
        except (FamilyFileError, ParameterError, DomainError) as e:
            if not args.batch:
                raise
            entry = {'family': str(path), 'classification': 'input_error', 'error': str(e)}
        results.append(entry)
        tally[entry['classification']] = tally.get(entry['classification'], 0) + 1
        mark = '✓' if entry['classification'] in ('agreement', 'oracle_miss') else '✗'
        status(args, f"{mark} {path.name}: {entry['classification']}")

    exit_name = compare_exit(tally)
    report = {
        'tool': config.TOOL_INFO['tool_name'],
        'version': config.TOOL_INFO['version'],
        'command': 'compare',
        'status': COMPARE_STATUS[exit_name],
        'exit_code': config.EXIT_CODES[exit_name],
        'families': len(results),
        'tally': tally,
        'results': results,
        'config': cfg.to_dict() if cfg is not None else {},
    }
    return write_report(args, helpers.jsonable(report), started)


def cmd_enumerate(args):
    family, region, cfg = load_inputs(args.family, args)
    _, _, stream, count = cs.select_critical(family, region)

    if count > cfg.budget:
        status(args, f"✗ {count} critical families exceed the budget of {cfg.budget}")
        line = {'count': count, 'budget': cfg.budget, 'status': INCONCLUSIVE}
        write_output(args, json.dumps(line, sort_keys=True) + '\n')
        return config.EXIT_CODES['INCONCLUSIVE']

    lines = []
    emitted = 0
    for index, cf in enumerate(stream):
        lines.append(json.dumps(helpers.jsonable({'index': index, 'critical_family': cf.describe()}), sort_keys=True))
        emitted += 1
    lines.append(json.dumps({'count': emitted, 'expected_count': count}, sort_keys=True))
    write_output(args, '\n'.join(lines) + '\n')
    status(args, f"✓ {emitted} critical families")
    return config.EXIT_CODES['STABLE']


def cmd_valueset(args):
    family, region, cfg = load_inputs(args.family, args)
    per_point = args.samples_per_point or config.CLI_CONFIG['valueset_samples_per_point']
    limit = family_sweep_limit(family, region, cfg)
    params = reg.boundary_parameters(region, cfg.boundary_count, limit if limit is not None else 1.0)

    zs = [complex(reg.boundary_map(region, t)) for t in params]
    sweep = value_set_sweep(family, zs, per_point, seed=cfg.seed)
    rows = []
    for t, values in zip(params, sweep):
        for assignment_id, v in enumerate(values):
            rows.append((repr(float(t)), repr(v.real), repr(v.imag), assignment_id))

    if args.out:
        fh = open(args.out, 'w', newline='', encoding='utf-8')
    else:
        fh = sys.stdout
    try:
        writer = csv.writer(fh, lineterminator='\n')
        writer.writerow(['boundary_param', 're_det', 'im_det', 'assignment_id'])
        writer.writerows(rows)
    finally:
        if fh is not sys.stdout:
            fh.close()
    status(args, f"✓ {len(rows)} value-set rows over {len(params)} boundary points")
    return config.EXIT_CODES['STABLE']


COMMANDS = {
    'check': cmd_check,
    'oracle': cmd_oracle,
    'compare': cmd_compare,
    'enumerate': cmd_enumerate,
    'valueset': cmd_valueset,
}


# ============================================================================
# ARGUMENTS
# ============================================================================

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--region', help="hurwitz, disk, shifted:<sigma> or sector:<phi> (overrides the file)")
    common.add_argument('--out', help="write the report here instead of standard output")
    common.add_argument('--seed', type=int, help=f"random seed (default {config.CLI_CONFIG['default_seed']})")
    common.add_argument('--boundary-count', type=int, dest='boundary_count', help="boundary sweep samples")
    common.add_argument('--max-depth', type=int, dest='max_depth', help="lambda-box bisection depth")
    common.add_argument('--tol', type=float, help="relative exclusion margin for 0")
    common.add_argument('--budget', type=int, help="maximum number of critical families")
    common.add_argument('--workers', type=int, help="process pool size")
    common.add_argument('--timing', action='store_true', help="add wall time to the report")
    common.add_argument('--quiet', action='store_true', help="no status lines on stderr")

    parser = argparse.ArgumentParser(prog=config.TOOL_INFO['tool_name'], description=config.TOOL_INFO['description'])
    parser.add_argument('--version', action='version', version=f"%(prog)s {config.TOOL_INFO['version']}")
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('check', parents=[common], help="critical-subset stability check")
    p.add_argument('family')

    p = sub.add_parser('oracle', parents=[common], help="Monte Carlo falsification")
    p.add_argument('family')
    p.add_argument('--samples', type=int, help="random members to draw")

    p = sub.add_parser('compare', parents=[common], help="check versus oracle")
    p.add_argument('family', nargs='?')
    p.add_argument('--samples', type=int, help="random members drawn by the oracle")
    p.add_argument('--batch', help="directory of family files")

    p = sub.add_parser('enumerate', parents=[common], help="dump critical families")
    p.add_argument('family')

    p = sub.add_parser('valueset', parents=[common], help="det values over the boundary as CSV")
    p.add_argument('family')
    p.add_argument('--samples-per-point', type=int, dest='samples_per_point', help="parameter samples per boundary point")

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logging(args.quiet)
    command = args.command

    try:
        return COMMANDS[command](args)
    except (FamilyFileError, ParameterError, DomainError) as e:
        status(args, f"✗ {e}")
        report = helpers.error_report(command, str(e), extra={'line': getattr(e, 'line', None)})
        write_output(args, json.dumps(report, indent=config.CLI_CONFIG['json_indent'], sort_keys=True) + '\n')
        return report['exit_code']
    except CapacityError as e:
        status(args, f"✗ {e}")
        report = helpers.error_report(command, str(e), exit_name='INCONCLUSIVE', extra={'count': e.count})
        report['status'] = INCONCLUSIVE
        write_output(args, json.dumps(report, indent=config.CLI_CONFIG['json_indent'], sort_keys=True) + '\n')
        return report['exit_code']


if __name__ == '__main__':
    sys.exit(main())
