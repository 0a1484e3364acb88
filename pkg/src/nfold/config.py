'''
Run configuration: defaults, the environment, YAML run files and flags.

A run file holds one or more YAML documents (separated by `---`). Each
document is an entry with a `type`:

- `run`: the settings of one command, identified by `id`.
- `import`: another run file, whose entries are loaded first. Entries of the
  importing file override imported entries with the same `id`, key by key.

The keys each entry type accepts are given by a `TypedDict`; missing required
keys and unknown keys are configuration errors.

Settings are merged in order of increasing priority: built-in defaults,
`NFOLD_PRECISION`, the selected run entry, command-line flags.
'''

from collections.abc import Iterable, Mapping
from dataclasses import dataclass, fields
import logging
import os
from pathlib import Path
from typing import Any, Literal, NotRequired, TypedDict, cast

import yaml

from nfold.cutoff import DEFAULT_TAU, Signal, valid_signal
from nfold.eigenfunctions import DEFAULT_CONVENTION, Convention, valid_convention
from nfold.epsilon_series import MAX_TERMS, Strategy, valid_strategy
from nfold.errors import ConfigError
from nfold.numerics import DEFAULT_BITS, MIN_BITS

logger = logging.getLogger(__name__)

PRECISION_VARIABLE = 'NFOLD_PRECISION'

type Command = Literal['eigensystem', 'charpoly', 'epsilon', 'differentiate',
                       'verify', 'plotdata', 'rootsums']
type OutputFormat = Literal['json', 'csv', 'text']
type Cutoff = int|Literal['auto']

COMMANDS: tuple[Command, ...] = ('eigensystem', 'charpoly', 'epsilon', 'differentiate',
                                 'verify', 'plotdata', 'rootsums')


def valid_command(command: Any) -> Command:
    match command:
        case 'eigensystem' | 'charpoly' | 'epsilon' | 'differentiate' | 'verify' | 'plotdata' | 'rootsums':
            return command
        case _:
            raise ConfigError(f'Invalid command: {command}')


def valid_format(fmt: Any) -> OutputFormat:
    match fmt:
        case 'json' | 'csv' | 'text':
            return fmt
        case _:
            raise ConfigError(f'Invalid format: {fmt}')


def valid_cutoff(cutoff: Any) -> Cutoff:
    match cutoff:
        case 'auto':
            return 'auto'
        case bool():
            raise ConfigError(f'Invalid cutoff: {cutoff}')
        case int() if cutoff >= 0:
            return cutoff
        case str() if cutoff.isdigit():
            return int(cutoff)
        case _:
            raise ConfigError(f'Invalid cutoff: {cutoff}')


@dataclass(frozen=True)
class RunConfig:
    '''
    The settings of one command run.
    '''
    command: Command
    n: int = 2
    count: int = 5
    precision_bits: int = DEFAULT_BITS
    output: Path|None = None
    format: OutputFormat = 'json'
    seed: int = 0
    delta: str = '0'
    '''
    Noise level, kept as the decimal text it was given in.
    '''
    tau: str = str(DEFAULT_TAU)
    cutoff: Cutoff = 'auto'
    signal: Signal = 'ramp'
    input: Path|None = None
    column: str|None = None
    convention: Convention = DEFAULT_CONVENTION
    terms: int = 20
    strategy: Strategy = 'online'
    digits: int|None = None
    points: int = 512
    inject_failure: bool = False

    def __post_init__(self):
        valid_command(self.command)
        valid_format(self.format)
        valid_cutoff(self.cutoff)
        try:
            valid_signal(self.signal)
            valid_convention(self.convention)
            valid_strategy(self.strategy)
        except ValueError as ex:
            raise ConfigError(str(ex)) from ex
        if self.n < 1:
            raise ConfigError(f'Invalid order: {self.n}')
        if self.count < 1:
            raise ConfigError(f'Invalid count: {self.count}')
        if self.precision_bits < MIN_BITS:
            raise ConfigError(f'Invalid precision: {self.precision_bits} bits (minimum {MIN_BITS})')
        if not 1 <= self.terms <= MAX_TERMS:
            raise ConfigError(f'Invalid number of terms: {self.terms} (1..{MAX_TERMS})')
        if self.points < 2:
            raise ConfigError(f'Invalid grid size: {self.points}')
        if self.digits is not None and self.digits < 1:
            raise ConfigError(f'Invalid digits: {self.digits}')
        delta, tau = _number('delta', self.delta), _number('tau', self.tau)
        if delta < 0:
            raise ConfigError(f'Invalid delta: {self.delta}')
        if tau <= 1:
            raise ConfigError(f'Invalid tau: {self.tau} (must exceed 1)')
        if self.command == 'differentiate' and self.cutoff == 'auto' and delta == 0:
            raise ConfigError('Invalid cutoff: auto needs a positive delta')

    @property
    def output_digits(self) -> int:
        '''
        Digits written for reals: as configured, else what the precision carries
        at the default tolerance.
        '''
        return self.digits or max(1, int(self.precision_bits * 0.30103) // 2)


def _number(name: str, text: str) -> float:
    try:
        return float(text)
    except ValueError as ex:
        raise ConfigError(f'Invalid {name}: {text}') from ex


class RunEntry[T: str](TypedDict):
    '''
    An entry, that is, a YAML document in a run file.
    '''
    id: NotRequired[str|int]
    '''
    Identifies the entry, so that importing files can override it.
    '''
    type: T
    tags: NotRequired[list[str]]


class RunImportEntry(RunEntry[Literal['import']]):
    type: Literal['import']
    file: str


class RunSettingsEntry(RunEntry[Literal['run']]):
    command: Command
    n: NotRequired[int]
    count: NotRequired[int]
    precision: NotRequired[int]
    output: NotRequired[str]
    format: NotRequired[OutputFormat]
    seed: NotRequired[int]
    delta: NotRequired[str|float]
    tau: NotRequired[str|float]
    cutoff: NotRequired[int|str]
    signal: NotRequired[Signal]
    input: NotRequired[str]
    column: NotRequired[str]
    convention: NotRequired[Convention]
    terms: NotRequired[int]
    strategy: NotRequired[Strategy]
    digits: NotRequired[int]
    points: NotRequired[int]
    inject_failure: NotRequired[bool]


ENTRY_TYPES: dict[str, type] = {
    'import': RunImportEntry,
    'run': RunSettingsEntry,
}


def entry_id(entry: Mapping[str, Any], default: str) -> str|int:
    return entry.get('id', None) or default


def valid_run_entry(entry: Any, source: Path|str = '<run file>') -> RunEntry[str]:
    '''
    Check an entry's type and keys. Does not check value types; `RunConfig`
    does that once everything is merged.
    '''
    if not isinstance(entry, dict):
        raise ConfigError(f'{source}: entry must be a mapping, got {type(entry).__name__}')
    type_ = entry.get('type', None)
    match ENTRY_TYPES.get(cast(str, type_)):
        case None:
            raise ConfigError(f'{source}: unknown entry type: {type_}')
        case td:
            required = cast(frozenset[str], td.__required_keys__) # type: ignore
            optional = cast(frozenset[str], td.__optional_keys__) # type: ignore
    for k in required:
        if k not in entry:
            raise ConfigError(f'{source}: missing required key {k} for {type_}')
    for k in entry:
        if k not in required and k not in optional:
            raise ConfigError(f'{source}: unknown key {k} for {type_}')
    return cast(RunEntry[str], entry)


def load_run_yaml(path: Path|str) -> dict[str|int, RunEntry[str]]:
    '''
    Load the entries of a run file, merged with its imports, by id.

    A document with an `id` but no `type` overrides the keys of an imported
    entry with that id. Entries are validated once merged.
    '''
    path = Path(path)
    try:
        with path.open() as f:
            documents = list(cast(Iterable[Any], yaml.safe_load_all(f)))
    except OSError as ex:
        raise ConfigError(f'Cannot read run file {path}: {ex}') from ex
    except yaml.YAMLError as ex:
        raise ConfigError(f'Invalid YAML in {path}: {ex}') from ex
    entries: list[dict[str, Any]] = []
    for document in documents:
        if not document:
            continue
        if not isinstance(document, dict):
            raise ConfigError(f'{path}: entry must be a mapping, got {type(document).__name__}')
        entries.append(cast(dict[str, Any], document))
    by_id: dict[str|int, RunEntry[str]] = {}
    for entry in entries:
        match entry.get('type', None):
            case 'import':
                file = cast(RunImportEntry, valid_run_entry(entry, path))['file']
                for id_, imported in load_run_yaml(path.parent / file).items():
                    if id_ in by_id:
                        imported.update(by_id[id_])
                    by_id[id_] = imported
            case _:
                pass
    for index, entry in enumerate(entries):
        match entry.get('type', None):
            case 'import':
                pass
            case _:
                id_ = entry_id(entry, f'{path.name}#{index}')
                if id_ in by_id:
                    by_id[id_].update(cast(RunEntry[str], entry))
                else:
                    by_id[id_] = cast(RunEntry[str], entry)
    for entry in by_id.values():
        valid_run_entry(entry, path)
    logger.debug('loaded %d run entries from %s', len(by_id), path)
    return by_id


def select_run(entries: Mapping[str|int, RunEntry[str]], run_id: str|None = None) -> RunSettingsEntry:
    '''
    The run entry with the given id, or the only run entry.
    '''
    runs = {k: e for k, e in entries.items() if e['type'] == 'run'}
    if run_id is not None:
        if run_id not in runs:
            raise ConfigError(f'No run {run_id}; runs are {", ".join(map(str, runs)) or "none"}')
        return cast(RunSettingsEntry, runs[run_id])
    match list(runs.values()):
        case [only]:
            return cast(RunSettingsEntry, only)
        case []:
            raise ConfigError('Run file has no run entries')
        case _:
            raise ConfigError(f'Run file has several runs; choose one of {", ".join(map(str, runs))}')


def env_precision(environ: Mapping[str, str]|None = None) -> int|None:
    '''
    The default precision from `NFOLD_PRECISION`, if set.
    '''
    environ = os.environ if environ is None else environ
    text = environ.get(PRECISION_VARIABLE, '').strip()
    if not text:
        return None
    if not text.isdigit():
        raise ConfigError(f'Invalid {PRECISION_VARIABLE}: {text}')
    return int(text)


ENTRY_FIELDS: dict[str, str] = {'precision': 'precision_bits'}
'''
Run-file keys whose `RunConfig` field has another name.
'''

_PATH_FIELDS = ('output', 'input')
_TEXT_FIELDS = ('delta', 'tau')


def _settings(entry: Mapping[str, Any], base: Path|None = None) -> dict[str, Any]:
    known = {f.name for f in fields(RunConfig)}
    out: dict[str, Any] = {}
    for key, value in entry.items():
        name = ENTRY_FIELDS.get(key, key)
        if name not in known or value is None:
            continue
        if name in _PATH_FIELDS:
            value = Path(value) if base is None else base / value
        elif name in _TEXT_FIELDS:
            value = str(value)
        elif name == 'cutoff':
            value = valid_cutoff(value)
        out[name] = value
    return out


def run_config(command: str|None = None, /, *,
               config: Path|str|None = None,
               run_id: str|None = None,
               environ: Mapping[str, str]|None = None,
               **flags: Any) -> RunConfig:
    '''
    Build a `RunConfig` from every source.

    PARAMETERS
    ----------
    command: str|None
        The command from the command line; may come from the run file instead.
    config: Path|str|None
        A YAML run file.
    run_id: str|None
        Which run of the file to use, if it has several.
    environ: Mapping[str, str]|None
        The environment (default: `os.environ`).
    flags: Any
        Explicit settings, by `RunConfig` field name. None means not given.
    '''
    values: dict[str, Any] = {}
    precision = env_precision(environ)
    if precision is not None:
        values['precision_bits'] = precision
    if config is not None:
        path = Path(config)
        entry = select_run(load_run_yaml(path), run_id)
        values.update(_settings(entry, path.parent))
    values.update(_settings(flags))
    if command is not None:
        if 'command' in values and values['command'] != command:
            logger.info('command %s overrides %s from the run file', command, values['command'])
        values['command'] = command
    if 'command' not in values:
        raise ConfigError('No command given')
    try:
        return RunConfig(**values)
    except TypeError as ex:
        raise ConfigError(f'Invalid settings: {ex}') from ex
