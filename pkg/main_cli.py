"""
Command-line entry point for the single-peaked election solvers.

Usage:
    python main_cli.py find-axis examples.elc
    python main_cli.py control ccav fixture.elc -k 3 --model unique
    python main_cli.py manip borda4.elc --rule score:3,2,1,0
    python main_cli.py gen partition-310 --items 1,2,3
    python main_cli.py verify --random 200 --seed 7

Exit codes: 0 when a decision is produced, 1 for invalid input, 2 when a
resource cap is hit.
"""
import functools
import json
import logging
import sys

import click

from libs.config import get_setting, load_config, resolve_config
from libs.core_model import APPROVAL, ScoringVector, WinnerModel, approval_scores, scoring_scores, winners_from_scores
from libs.election_file import (
    ElectionDocument, document_from_manipulation, manipulation_instance, read_election, serialize_election,
)
from libs.exceptions import ElectionError, ResourceLimitError
from libs.generators import gen_random_instance, gen_random_sp
from libs.manipulation import solve_ccwm
from libs.reductions import PartitionInstance, reduce_partition
from libs.results import (
    CONTROL_ACTIONS, build_control_instance, control_result, manipulation_result, solve_control,
    verification_summary, verify_documents,
)
from libs.single_peaked import consistent, find_axis, is_axis

logger = logging.getLogger(__name__)

MODELS = click.Choice([m.value for m in WinnerModel])
GEN_KINDS = ('random', 'partition-3veto5', 'partition-310', 'partition-borda4', 'partition-dichotomy:A1,A2')


def reports_errors(func):
    """Print library errors as `[error] message` and map them to exit codes 1 and 2."""
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except ResourceLimitError as exc:
            click.echo(f"[error] {exc}", err=True)
            raise click.exceptions.Exit(2)
        except (ElectionError, FileNotFoundError) as exc:
            click.echo(f"[error] {exc}", err=True)
            raise click.exceptions.Exit(1)
    return wrapper


def emit(payload):
    click.echo(json.dumps(payload, indent=2, sort_keys=True))


def _ids(text):
    return tuple(part.strip() for part in text.split(',') if part.strip())


@click.group()
@click.option('--config', 'config_path', type=click.Path(), default=None, help='YAML or Excel config file')
@click.option('--verbose', '-v', is_flag=True, help='Debug logging on stderr')
@click.pass_context
@reports_errors
def cli(ctx, config_path, verbose):
    """Control and manipulation solvers for single-peaked elections."""
    config = load_config(config_path) if config_path else resolve_config()
    level = logging.DEBUG if verbose else getattr(logging, str(config['logging']['level']).upper(), logging.WARNING)
    logging.basicConfig(level=level, format='%(levelname)s: %(message)s', stream=sys.stderr, force=True)
    ctx.obj = {'config': config, 'verbose': verbose}


@cli.command('check-axis')
@click.argument('file', type=click.Path())
@click.option('--axis', default=None, help='Comma-separated axis; defaults to the AXIS section')
@reports_errors
def check_axis_cmd(file, axis):
    """Check the ballots against an axis."""
    doc = read_election(file)
    axis = _ids(axis) if axis else doc.axis
    if axis is None:
        raise ElectionError("No axis: add an AXIS section or pass --axis")
    election = doc.election()
    ok = is_axis(election.candidates, axis) and consistent(election, axis)
    emit({'axis': list(axis), 'consistent': ok})


@cli.command('find-axis')
@click.argument('file', type=click.Path())
@reports_errors
def find_axis_cmd(file):
    """Find an axis the ballots are single-peaked on."""
    doc = read_election(file)
    axis = find_axis(doc.election())
    emit({'axis': list(axis) if axis is not None else None, 'single_peaked': axis is not None})


@cli.command('winners')
@click.argument('file', type=click.Path())
@click.option('--rule', default='plurality', show_default=True,
              help='approval, plurality, veto, borda or score:a1,a2,...')
@click.option('--model', type=MODELS, default='unique', show_default=True)
@reports_errors
def winners_cmd(file, rule, model):
    """Scores and winners of the election."""
    election = read_election(file).election()
    if rule == APPROVAL:
        scores = approval_scores(election)
    else:
        scores = scoring_scores(election, ScoringVector.parse(rule, election.m))
    won = winners_from_scores(scores, model)
    emit({'model': model, 'rule': rule, 'scores': scores,
          'winners': [c for c in election.candidates if c in won]})


@cli.command('control')
@click.argument('action', type=click.Choice(list(CONTROL_ACTIONS)))
@click.argument('file', type=click.Path())
@click.option('-k', 'budget', type=int, default=None, help='Budget (ignored by unlimited adding)')
@click.option('--model', type=MODELS, default='unique', show_default=True)
@click.option('--target', '-p', default=None, help='Distinguished candidate; overrides DISTINGUISHED')
@reports_errors
def control_cmd(action, file, budget, model, target):
    """Decide a control problem and print a ResultDocument."""
    doc = read_election(file)
    inst = build_control_instance(doc, action, budget, model, target)
    cert = solve_control(inst)
    click.echo(control_result(inst, cert).to_json())


@cli.command('manip')
@click.argument('file', type=click.Path())
@click.option('--rule', required=True, help='plurality, veto, borda or score:a1,a2,...')
@click.option('--model', type=MODELS, default='unique', show_default=True)
@click.option('--target', '-p', default=None, help='Distinguished candidate; overrides DISTINGUISHED')
@click.pass_context
@reports_errors
def manip_cmd(ctx, file, rule, model, target):
    """Decide constructive coalition weighted manipulation."""
    doc = read_election(file)
    inst = manipulation_instance(doc, rule, model, target)
    cert = solve_ccwm(inst, ctx.obj['config'])
    click.echo(manipulation_result(inst, cert).to_json())


def _parse_gen_kind(kind):
    if kind.startswith('partition-dichotomy:'):
        try:
            a1, a2 = (int(x) for x in kind.split(':', 1)[1].split(','))
        except ValueError:
            raise ElectionError(f"Expected partition-dichotomy:A1,A2 with integers, got {kind!r}")
        return 'dichotomy', (a1, a2)
    if kind in GEN_KINDS[:4]:
        return kind.replace('partition-', ''), None
    raise ElectionError(f"Unknown generator {kind!r}; expected one of {list(GEN_KINDS)}")


@cli.command('gen')
@click.argument('kind')
@click.option('--seed', type=int, default=0, show_default=True)
@click.option('-m', 'm', type=int, default=4, show_default=True, help='Candidates (random)')
@click.option('-n', 'n', type=int, default=5, show_default=True, help='Ballots (random)')
@click.option('--ballots', type=click.Choice(['linear', 'approval']), default='linear', show_default=True)
@click.option('--weight-cap', type=int, default=None, help='Largest ballot weight (random)')
@click.option('--instance', is_flag=True, help='Add pool, spoilers, target and manipulators (random)')
@click.option('--items', default=None, help='Comma-separated PARTITION items (partition-*)')
@click.option('--model', type=MODELS, default='nonunique', show_default=True)
@click.pass_context
@reports_errors
def gen_cmd(ctx, kind, seed, m, n, ballots, weight_cap, instance, items, model):
    """Print a generated ElectionFile: random, partition-3veto5, partition-310, partition-borda4, partition-dichotomy:A1,A2."""
    config = ctx.obj['config']
    if kind == 'random':
        cap = weight_cap if weight_cap is not None else get_setting(config, 'generator', 'weight_cap')
        if instance:
            doc = gen_random_instance(seed, m, n, ballots, cap)
        else:
            election, axis = gen_random_sp(seed, m, n, ballots, cap)
            doc = ElectionDocument(election.candidates, election.ballots, axis=axis)
        click.echo(serialize_election(doc), nl=False)
        return
    reduction, alpha = _parse_gen_kind(kind)
    if items is None:
        raise ElectionError(f"{kind} needs --items")
    try:
        values = tuple(int(x) for x in _ids(items))
    except ValueError:
        raise ElectionError(f"--items must be comma-separated integers, got {items!r}")
    inst = reduce_partition(reduction, PartitionInstance(values), model, alpha)
    click.echo(f"# rule: {inst.rule}  model: {inst.model.value}")
    click.echo(serialize_election(document_from_manipulation(inst)), nl=False)


@cli.command('verify')
@click.argument('files', nargs=-1, type=click.Path())
@click.option('--against-oracle', is_flag=True, default=True, help='Compare with the brute-force oracles (always on)')
@click.option('--random', 'count', type=int, default=None, help='Verify N seeded random instances')
@click.option('--seed', type=int, default=0, show_default=True)
@click.option('-m', 'm', type=int, default=4, show_default=True)
@click.option('-n', 'n', type=int, default=4, show_default=True)
@click.option('--ballots', type=click.Choice(['linear', 'approval', 'mixed']), default='mixed', show_default=True)
@click.option('--rule', default='borda', show_default=True, help='Rule for the manipulation checks')
@click.option('-k', 'budget', type=int, default=None, help='Control budget (default from config)')
@click.pass_context
@reports_errors
def verify_cmd(ctx, files, against_oracle, count, seed, m, n, ballots, rule, budget):
    """Run the solvers against the oracles and print a summary."""
    config = ctx.obj['config']
    if files and count is not None:
        raise ElectionError("Give either FILE arguments or --random, not both")
    if files:
        docs = [read_election(f) for f in files]
    elif count is not None:
        kinds = ['linear', 'approval'] if ballots == 'mixed' else [ballots]
        cap = get_setting(config, 'generator', 'weight_cap')
        docs = [gen_random_instance(seed + i, m, n, kinds[i % len(kinds)], cap) for i in range(count)]
    else:
        raise ElectionError("Nothing to verify: give FILE arguments or --random N")
    df = verify_documents(docs, rule, budget, config, progress=ctx.obj['verbose'])
    emit(verification_summary(df, len(docs)))


def main(argv=None):
    try:
        rv = cli.main(args=argv, prog_name='main_cli.py', standalone_mode=False)
    except click.exceptions.Abort:
        click.echo("Aborted!", err=True)
        return 1
    except click.ClickException as exc:
        exc.show()
        return 1
    return rv if isinstance(rv, int) else 0


if __name__ == '__main__':
    sys.exit(main())
