"""
Result documents, certificate replay and batch verification against the oracles.
"""
from __future__ import annotations

import json
import logging
import sys
from dataclasses import asdict, dataclass
from typing import List, Optional

import pandas as pd
from tqdm import tqdm

from libs import control_approval, control_plurality
from libs.config import get_setting
from libs.control_approval import (
    VoterAction, VoterCertificate, VoterControlInstance, apply_voter_certificate, solve_voter_control,
)
from libs.control_plurality import (
    CandidateAction, CandidateCertificate, CandidateControlInstance, apply_candidate_certificate,
    solve_candidate_control,
)
from libs.core_model import (
    APPROVAL, ScoringVector, WinnerModel, approval_scores, plurality_scores, restrict, scoring_scores,
)
from libs.election_file import ElectionDocument, candidate_control_instance, voter_control_instance
from libs.exceptions import ElectionError
from libs.manipulation import (
    ManipulationCertificate, ManipulationInstance, apply_manipulation_certificate, coalition_wins, solve_ccwm,
)
from libs.oracles import brute_axis, brute_control, brute_manipulation
from libs.single_peaked import find_axis

logger = logging.getLogger(__name__)

# CLI name -> (voter or candidate, action, constructive)
CONTROL_ACTIONS = {
    'ccav': ('voter', VoterAction.ADD_VOTERS, True),
    'ccdv': ('voter', VoterAction.DELETE_VOTERS, True),
    'ccac': ('candidate', CandidateAction.ADD, True),
    'ccuac': ('candidate', CandidateAction.UNLIMITED_ADD, True),
    'dcac': ('candidate', CandidateAction.ADD, False),
    'dcuac': ('candidate', CandidateAction.UNLIMITED_ADD, False),
    'ccdc': ('candidate', CandidateAction.DELETE, True),
    'dcdc': ('candidate', CandidateAction.DELETE, False),
}


@dataclass(frozen=True)
class ResultDocument:
    decision: str
    model: str
    action: str
    certificate: Optional[list]
    scores_before: dict
    scores_after: Optional[dict]
    axis_used: Optional[list]

    def to_dict(self):
        return asdict(self)

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def build_control_instance(doc: ElectionDocument, name, budget=None, model=WinnerModel.UNIQUE, target=None):
    if name not in CONTROL_ACTIONS:
        raise ElectionError(f"Unknown control action {name!r}; expected one of {list(CONTROL_ACTIONS)}")
    family, action, constructive = CONTROL_ACTIONS[name]
    if family == 'voter':
        if budget is None:
            raise ElectionError(f"{name} needs a budget")
        return voter_control_instance(doc, action, budget, model, target)
    if budget is None and action != CandidateAction.UNLIMITED_ADD:
        raise ElectionError(f"{name} needs a budget")
    return candidate_control_instance(doc, action, constructive, budget, model, target)


def solve_control(inst):
    if isinstance(inst, VoterControlInstance):
        return solve_voter_control(inst)
    return solve_candidate_control(inst)


def _action_name(inst):
    for name, (_, action, constructive) in CONTROL_ACTIONS.items():
        if isinstance(inst, VoterControlInstance) and inst.action == action:
            return name
        if isinstance(inst, CandidateControlInstance) and inst.action == action \
                and inst.constructive == constructive:
            return name
    raise ElectionError(f"No action name for {type(inst).__name__}")


def control_result(inst, cert) -> ResultDocument:
    """
    ResultDocument for a voter or candidate control decision.

    Certificates list `{ballot, count, index}` entries for voter control and
    candidate ids for candidate control.
    """
    if isinstance(inst, VoterControlInstance):
        axis = control_approval.resolve_axis(inst)
        before = approval_scores(inst.election)
        entries = None
        after = None
        if cert is not None:
            source = inst.pool if cert.action == VoterAction.ADD_VOTERS else inst.election.ballots
            order = inst.election.candidates
            entries = [{'index': i, 'count': count, 'ballot': source[i].describe(order)}
                       for i, count in cert.selected]
            after = approval_scores(apply_voter_certificate(inst, cert))
    else:
        axis = control_plurality.resolve_axis(inst)
        before = plurality_scores(restrict(inst.election, inst.registered))
        entries = None
        after = None
        if cert is not None:
            entries = list(cert.candidates)
            after = plurality_scores(apply_candidate_certificate(inst, cert))
    return ResultDocument('yes' if cert is not None else 'no', inst.model.value, _action_name(inst),
                          entries, before, after, list(axis))


def manipulation_result(inst: ManipulationInstance, cert: Optional[ManipulationCertificate]) -> ResultDocument:
    before = scoring_scores(inst.election(), inst.rule)
    if cert is None:
        axis = list(inst.axis) if inst.axis is not None else None
        return ResultDocument('no', inst.model.value, 'manipulation', None, before, None, axis)
    entries = [{'weight': w, 'ballot': '>'.join(r)} for r, w in zip(cert.ballots, inst.manipulator_weights)]
    after = scoring_scores(apply_manipulation_certificate(inst, cert), inst.rule)
    return ResultDocument('yes', inst.model.value, 'manipulation', entries, before, after, list(cert.axis))


def replay(inst, result: dict):
    """
    Recompute scores_after from a result's certificate alone.

    Returns:
    --------
    dict or None : the replayed score table, None for a 'no' result
    """
    if result['decision'] != 'yes':
        return None
    entries = result['certificate']
    if isinstance(inst, VoterControlInstance):
        cert = VoterCertificate(inst.action, tuple((e['index'], e['count']) for e in entries))
        return approval_scores(apply_voter_certificate(inst, cert))
    if isinstance(inst, CandidateControlInstance):
        cert = CandidateCertificate(inst.action, tuple(entries))
        return plurality_scores(apply_candidate_certificate(inst, cert))
    rankings = tuple(tuple(e['ballot'].split('>')) for e in entries)
    cert = ManipulationCertificate(rankings, tuple(result['axis_used']))
    return scoring_scores(apply_manipulation_certificate(inst, cert), inst.rule)


# ---------------------------------------------------------------------------
# Batch verification
# ---------------------------------------------------------------------------

def _row(index, check, model, solver, oracle, certified):
    return {
        'instance': index,
        'check': check,
        'model': model,
        'solver': 'yes' if solver else 'no',
        'oracle': 'yes' if oracle else 'no',
        'certified': bool(certified),
        'match': bool(solver) == bool(oracle),
    }


def _registered_only(doc: ElectionDocument):
    election = restrict(doc.election(), doc.candidates)
    axis = None if doc.axis is None else tuple(c for c in doc.axis if c in set(doc.candidates))
    return election, axis


def _check_document(index, doc: ElectionDocument, rule, budget, config) -> List[dict]:
    rows = []
    election = doc.election()
    found = find_axis(election)
    axes = brute_axis(election, config)
    rows.append(_row(index, 'find-axis', '-', found is not None, bool(axes), found is None or found in axes))
    if found is None or doc.distinguished is None:
        return rows

    models = (WinnerModel.UNIQUE, WinnerModel.NONUNIQUE)
    if election.kind == APPROVAL or (election.kind is None and doc.pool is not None):
        for name in ('ccav', 'ccdv'):
            if name == 'ccav' and doc.pool is None:
                continue
            for model in models:
                inst = build_control_instance(doc, name, budget, model)
                cert = solve_control(inst)
                certified = cert is None or control_approval.goal_reached(inst, apply_voter_certificate(inst, cert))
                rows.append(_row(index, name, model.value, cert is not None,
                                 brute_control(inst, config) is not None, certified))
        return rows

    if doc.distinguished not in doc.candidates:
        return rows
    registered, sub_axis = _registered_only(doc)
    for name, (_, action, constructive) in CONTROL_ACTIONS.items():
        if name in ('ccav', 'ccdv'):
            continue
        for model in models:
            if action == CandidateAction.DELETE:
                inst = CandidateControlInstance(registered, doc.candidates, doc.distinguished, budget, (),
                                                model, action, constructive, sub_axis)
            else:
                inst = candidate_control_instance(doc, action, constructive, budget, model)
            cert = solve_candidate_control(inst)
            certified = cert is None or control_plurality.goal_reached(
                inst, apply_candidate_certificate(inst, cert).candidates)
            rows.append(_row(index, name, model.value, cert is not None,
                             brute_control(inst, config) is not None, certified))

    if doc.manipulators is not None and rule != APPROVAL:
        vector = rule if isinstance(rule, ScoringVector) else ScoringVector.parse(rule, registered.m)
        for model in models:
            inst = ManipulationInstance(registered.candidates, registered.ballots, doc.manipulators,
                                        doc.distinguished, vector, model, sub_axis)
            cert = solve_ccwm(inst, config)
            certified = cert is None or coalition_wins(inst, cert.ballots, cert.axis)
            rows.append(_row(index, 'manipulation', model.value, cert is not None,
                             brute_manipulation(inst, config) is not None, certified))
    return rows


def verify_documents(docs, rule='borda', budget=None, config=None, progress=False) -> pd.DataFrame:
    """
    Run every applicable solver and its oracle on each document.

    Parameters:
    -----------
    docs : list of ElectionDocument
    rule : str or ScoringVector
        Scoring rule for the manipulation checks
    budget : int, optional
        Control budget; defaults to verify.budget from config
    config : dict, optional
    progress : bool
        Show a tqdm progress bar on stderr

    Returns:
    --------
    pd.DataFrame : one row per check, in input order
    """
    if budget is None:
        budget = get_setting(config, 'verify', 'budget')
    rows = []
    for index, doc in enumerate(tqdm(docs, desc='verify', disable=not progress, file=sys.stderr)):
        rows.extend(_check_document(index, doc, rule, budget, config))
    columns = ['instance', 'check', 'model', 'solver', 'oracle', 'certified', 'match']
    df = pd.DataFrame(rows, columns=columns)
    bad = df[~(df['match'] & df['certified'])]
    if len(bad):
        logger.warning(f"{len(bad)} of {len(df)} checks disagree with the oracle")
    return df


def _native(record):
    out = dict(record)
    out['instance'] = int(out['instance'])
    out['certified'] = bool(out['certified'])
    out['match'] = bool(out['match'])
    return out


def verification_summary(df: pd.DataFrame, instances) -> dict:
    ok = df['match'] & df['certified']
    per_check = df.assign(ok=ok).groupby('check', sort=True)['ok'].agg(['size', 'sum'])
    return {
        'instances': int(instances),
        'checks': int(len(df)),
        'mismatches': [
            _native(record) for record in df[~ok].to_dict('records')
        ],
        'per_check': {name: {'checks': int(row['size']), 'passed': int(row['sum'])}
                      for name, row in per_check.iterrows()},
    }
