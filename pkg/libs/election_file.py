"""
ElectionFile reading and writing, and instance builders for the solvers.

An ElectionFile is plain text made of sections. Inline sections carry a
comma-separated value on the header line; block sections (BALLOTS, POOL)
carry one ballot per following line:

    # comment
    CANDIDATES: l1, p, r1
    AXIS: l1, p, r1
    DISTINGUISHED: p
    BALLOTS:
    2 x approve{r1}
    1 x approve{l1}
    POOL:
    3 x approve{p}

A ballot line is `[<multiplicity> x] [w=<weight>] <ballot>`, where the ballot
is `c1>c2>...` or `approve{c1,c2}`. See documentation/FILE_FORMATS.md.
"""
from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Tuple

from libs.control_approval import VoterAction, VoterControlInstance
from libs.control_plurality import CandidateAction, CandidateControlInstance
from libs.core_model import (
    ApprovalBallot, Election, InputMode, LinearBallot, ScoringVector, WinnerModel,
)
from libs.exceptions import ElectionError, ElectionFileError
from libs.manipulation import ManipulationInstance

logger = logging.getLogger(__name__)

INLINE_SECTIONS = ('CANDIDATES', 'SPOILERS', 'AXIS', 'DISTINGUISHED', 'MANIPULATORS', 'MODE')
BLOCK_SECTIONS = ('BALLOTS', 'POOL')

_HEADER = re.compile(r'^\s*([A-Za-z]+)\s*:(.*)$')
_BALLOT = re.compile(r'^(\s*)(?:(\S+)\s+x\s+)?(?:w=(\S*)\s+)?(\S.*?)\s*$')


@dataclass(frozen=True)
class ElectionDocument:
    """Everything an ElectionFile can say, before it is turned into a solver instance."""
    candidates: Tuple[str, ...]
    ballots: Tuple = ()
    spoilers: Tuple[str, ...] = ()
    axis: Optional[Tuple[str, ...]] = None
    distinguished: Optional[str] = None
    manipulators: Optional[Tuple[int, ...]] = None
    pool: Optional[Tuple] = None
    input_mode: InputMode = InputMode.STANDARD

    @property
    def all_candidates(self):
        return tuple(self.candidates) + tuple(self.spoilers)

    def election(self) -> Election:
        return Election(self.all_candidates, self.ballots, self.input_mode)


@dataclass
class _Entry:
    line: int
    column: int
    multiplicity: int
    weight: int
    body: str
    body_column: int


@dataclass
class _Draft:
    inline: dict = field(default_factory=dict)
    blocks: dict = field(default_factory=dict)


def _split_ids(value, line, column):
    text = value.strip()
    if not text:
        return []
    ids = []
    offset = column
    for part in value.split(','):
        name = part.strip()
        if not name:
            raise ElectionFileError("Empty id in list", line, offset)
        if re.search(r'[\s>{}]', name):
            raise ElectionFileError(f"Invalid id {name!r}", line, offset + part.index(name[0]))
        ids.append((name, offset + part.index(name)))
        offset += len(part) + 1
    return ids


def _parse_int(text, what, line, column, minimum):
    try:
        value = int(text)
    except (TypeError, ValueError):
        raise ElectionFileError(f"{what} must be an integer, got {text!r}", line, column)
    if value < minimum:
        raise ElectionFileError(f"{what} must be at least {minimum}, got {value}", line, column)
    return value


def _scan(text) -> _Draft:
    draft = _Draft()
    section = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        content = raw.split('#', 1)[0]
        if not content.strip():
            continue
        header = _HEADER.match(content)
        if header:
            name = header.group(1)
            value = header.group(2)
            column = content.index(name) + 1
            if name not in INLINE_SECTIONS + BLOCK_SECTIONS:
                raise ElectionFileError(f"Unknown section {name!r}", lineno, column)
            if name in draft.inline or name in draft.blocks:
                raise ElectionFileError(f"Section {name} appears twice", lineno, column)
            if name in BLOCK_SECTIONS:
                if value.strip():
                    raise ElectionFileError(f"Section {name} takes ballots on the following lines",
                                            lineno, content.index(':') + 2)
                draft.blocks[name] = []
                section = name
            else:
                draft.inline[name] = (value, lineno, content.index(':') + 2)
                section = None
            continue

        if section is None:
            raise ElectionFileError("Ballot line outside a BALLOTS or POOL section", lineno,
                                    len(content) - len(content.lstrip()) + 1)
        match = _BALLOT.match(content)
        indent = len(match.group(1))
        mult_text, weight_text, body = match.group(2), match.group(3), match.group(4)
        multiplicity = 1
        if mult_text is not None:
            multiplicity = _parse_int(mult_text, "Multiplicity", lineno, indent + 1, 1)
        weight = 1
        if weight_text is not None:
            weight = _parse_int(weight_text, "Weight", lineno, content.index('w=') + 3, 0)
        draft.blocks[section].append(
            _Entry(lineno, indent + 1, multiplicity, weight, body, content.rindex(body) + 1))
    return draft


def _parse_ballot(entry: _Entry, declared):
    body = entry.body
    if body.startswith('approve{'):
        if not body.endswith('}'):
            raise ElectionFileError("Approval ballot must end with '}'", entry.line, entry.body_column + len(body))
        inner = body[len('approve{'):-1]
        ids = _split_ids(inner, entry.line, entry.body_column + len('approve{'))
        seen = set()
        for name, column in ids:
            if name not in declared:
                raise ElectionFileError(f"Unknown candidate {name!r}", entry.line, column)
            if name in seen:
                raise ElectionFileError(f"Candidate {name!r} approved twice", entry.line, column)
            seen.add(name)
        return ApprovalBallot(frozenset(seen), entry.weight, entry.multiplicity)

    ranking = []
    offset = entry.body_column
    for part in body.split('>'):
        name = part.strip()
        column = offset + (part.index(name) if name else 0)
        if not name:
            raise ElectionFileError("Empty position in ranking", entry.line, column)
        if name not in declared:
            raise ElectionFileError(f"Unknown candidate {name!r}", entry.line, column)
        if name in ranking:
            raise ElectionFileError(f"Candidate {name!r} ranked twice", entry.line, column)
        ranking.append(name)
        offset += len(part) + 1
    if len(ranking) != len(declared):
        missing = [c for c in declared if c not in ranking]
        raise ElectionFileError(f"Ranking leaves out {missing}", entry.line, entry.body_column)
    return LinearBallot(tuple(ranking), entry.weight, entry.multiplicity)


def parse_election(text: str) -> ElectionDocument:
    """
    Parse ElectionFile text.

    Parameters:
    -----------
    text : str
        File contents

    Returns:
    --------
    ElectionDocument : validated document

    Raises:
    -------
    ElectionFileError : with the 1-based line and column of the first problem
    """
    draft = _scan(text)
    if 'CANDIDATES' not in draft.inline:
        raise ElectionFileError("Missing CANDIDATES section", 1)
    if 'BALLOTS' not in draft.blocks:
        raise ElectionFileError("Missing BALLOTS section", 1)

    def ids_of(name):
        value, line, column = draft.inline[name]
        found = _split_ids(value, line, column)
        seen = set()
        for c, col in found:
            if c in seen:
                raise ElectionFileError(f"Candidate {c!r} listed twice in {name}", line, col)
            seen.add(c)
        return found

    candidates = [c for c, _ in ids_of('CANDIDATES')]
    if not candidates:
        raise ElectionFileError("CANDIDATES must not be empty", draft.inline['CANDIDATES'][1])
    spoilers = []
    if 'SPOILERS' in draft.inline:
        line = draft.inline['SPOILERS'][1]
        for c, col in ids_of('SPOILERS'):
            if c in candidates:
                raise ElectionFileError(f"Spoiler {c!r} is also a registered candidate", line, col)
            spoilers.append(c)
    declared = candidates + spoilers

    axis = None
    if 'AXIS' in draft.inline:
        line = draft.inline['AXIS'][1]
        axis = []
        for c, col in ids_of('AXIS'):
            if c not in declared:
                raise ElectionFileError(f"Unknown candidate {c!r} in AXIS", line, col)
            axis.append(c)
        axis = tuple(axis)

    distinguished = None
    if 'DISTINGUISHED' in draft.inline:
        value, line, column = draft.inline['DISTINGUISHED']
        found = _split_ids(value, line, column)
        if len(found) != 1:
            raise ElectionFileError("DISTINGUISHED names exactly one candidate", line, column)
        distinguished, col = found[0]
        if distinguished not in declared:
            raise ElectionFileError(f"Unknown candidate {distinguished!r}", line, col)

    manipulators = None
    if 'MANIPULATORS' in draft.inline:
        value, line, column = draft.inline['MANIPULATORS']
        manipulators = []
        offset = column
        if value.strip():
            for part in value.split(','):
                col = offset + len(part) - len(part.lstrip())
                manipulators.append(_parse_int(part.strip(), "Manipulator weight", line, col, 0))
                offset += len(part) + 1
        manipulators = tuple(manipulators)

    mode = None
    if 'MODE' in draft.inline:
        value, line, column = draft.inline['MODE']
        try:
            mode = InputMode(value.strip())
        except ValueError:
            raise ElectionFileError(f"MODE must be 'standard' or 'succinct', got {value.strip()!r}", line, column)

    ballots = tuple(_parse_ballot(entry, declared) for entry in draft.blocks['BALLOTS'])
    pool = None
    if 'POOL' in draft.blocks:
        pool = tuple(_parse_ballot(entry, declared) for entry in draft.blocks['POOL'])

    entries = draft.blocks['BALLOTS'] + draft.blocks.get('POOL', [])
    parsed = ballots + (pool or ())
    if parsed:
        kind = type(parsed[0])
        for entry, ballot in zip(entries, parsed):
            if type(ballot) is not kind:
                raise ElectionFileError("Ballots mix linear orders and approval vectors", entry.line, entry.body_column)

    multiple = [entry for entry in entries if entry.multiplicity > 1]
    if mode == InputMode.STANDARD and multiple:
        raise ElectionFileError("Multiplicity above 1 requires MODE: succinct", multiple[0].line, multiple[0].column)
    if mode is None:
        mode = InputMode.SUCCINCT if multiple else InputMode.STANDARD

    doc = ElectionDocument(tuple(candidates), ballots, tuple(spoilers), axis, distinguished,
                           manipulators, pool, mode)
    doc.election()
    logger.debug(f"Parsed {len(ballots)} ballot line(s) over {len(declared)} candidates")
    return doc


def read_election(path) -> ElectionDocument:
    path = Path(path)
    if not path.exists():
        raise ElectionError(f"Election file not found: {path}")
    return parse_election(path.read_text())


def _ballot_line(ballot, order):
    prefix = f"{ballot.multiplicity} x "
    if ballot.weight != 1:
        prefix += f"w={ballot.weight} "
    if isinstance(ballot, ApprovalBallot):
        return prefix + ballot.describe(order)
    return prefix + str(ballot)


def serialize_election(doc: ElectionDocument) -> str:
    """ElectionFile text for `doc`; parse_election reads it back unchanged."""
    order = doc.all_candidates
    lines = [f"CANDIDATES: {', '.join(doc.candidates)}"]
    if doc.spoilers:
        lines.append(f"SPOILERS: {', '.join(doc.spoilers)}")
    if doc.axis is not None:
        lines.append(f"AXIS: {', '.join(doc.axis)}")
    if doc.distinguished is not None:
        lines.append(f"DISTINGUISHED: {doc.distinguished}")
    if doc.manipulators is not None:
        lines.append(f"MANIPULATORS: {', '.join(str(w) for w in doc.manipulators)}".rstrip())
    if doc.input_mode == InputMode.SUCCINCT:
        lines.append("MODE: succinct")
    lines.append("BALLOTS:")
    lines.extend(_ballot_line(b, order) for b in doc.ballots)
    if doc.pool is not None:
        lines.append("POOL:")
        lines.extend(_ballot_line(b, order) for b in doc.pool)
    return '\n'.join(lines) + '\n'


# ---------------------------------------------------------------------------
# Builders
# ---------------------------------------------------------------------------

def _target(doc, target):
    p = target if target is not None else doc.distinguished
    if p is None:
        raise ElectionError("No distinguished candidate: add DISTINGUISHED or pass --target")
    return p


def voter_control_instance(doc: ElectionDocument, action, budget, model=WinnerModel.UNIQUE,
                           target=None) -> VoterControlInstance:
    action = VoterAction(action)
    if doc.spoilers:
        raise ElectionError("Voter control takes no SPOILERS")
    pool = None
    if action == VoterAction.ADD_VOTERS:
        if doc.pool is None:
            raise ElectionError("Adding voters needs a POOL section")
        pool = doc.pool
    return VoterControlInstance(doc.election(), _target(doc, target), budget, model, action, pool, doc.axis)


def candidate_control_instance(doc: ElectionDocument, action, constructive=True, budget=None,
                               model=WinnerModel.UNIQUE, target=None) -> CandidateControlInstance:
    action = CandidateAction(action)
    election = doc.election()
    spoilers = doc.spoilers
    axis = doc.axis
    if action == CandidateAction.DELETE and spoilers:
        raise ElectionError("Deleting candidates takes no SPOILERS")
    return CandidateControlInstance(election, doc.candidates, _target(doc, target), budget, spoilers,
                                    model, action, constructive, axis)


def manipulation_instance(doc: ElectionDocument, rule, model=WinnerModel.UNIQUE,
                          target=None) -> ManipulationInstance:
    if doc.manipulators is None:
        raise ElectionError("Manipulation needs a MANIPULATORS section")
    if doc.spoilers or doc.pool is not None:
        raise ElectionError("Manipulation takes no SPOILERS or POOL")
    election = doc.election()
    if election.kind == 'approval':
        raise ElectionError("Manipulation needs linear ballots")
    if not isinstance(rule, ScoringVector):
        rule = ScoringVector.parse(rule, election.m)
    return ManipulationInstance(election.candidates, election.ballots, doc.manipulators,
                                _target(doc, target), rule, model, doc.axis)


def document_from_manipulation(inst: ManipulationInstance) -> ElectionDocument:
    mode = InputMode.SUCCINCT if any(b.multiplicity > 1 for b in inst.nonmanipulators) else InputMode.STANDARD
    return ElectionDocument(inst.candidates, inst.nonmanipulators, axis=inst.axis,
                            distinguished=inst.distinguished, manipulators=inst.manipulator_weights,
                            input_mode=mode)
