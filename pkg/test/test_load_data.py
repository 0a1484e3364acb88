'''
Test the example run files.
'''

from pathlib import Path

from nfold.config import load_run_yaml, run_config

ROOT=Path(__file__).parent.parent

def test_load():
    '''
    At least test our example file.
    '''
    entries = load_run_yaml(ROOT / 'data.yml')
    assert set(entries) == {'ramp', 'table1'}
    config = run_config(config=ROOT / 'data.yml', run_id='table1', environ={})
    assert config.command == 'eigensystem'
    assert config.convention == 'last-coefficient-one'


def test_load_ramp():
    config = run_config(config=ROOT / 'data.yml', run_id='ramp', environ={})
    assert (config.command, config.n, config.count, config.cutoff) == ('differentiate', 1, 25, 25)
    assert config.precision_bits == 128
    assert config.delta == '0'


def test_load_alt():
    '''
    The import keeps the imported keys and overrides the rest.
    '''
    config = run_config(config=ROOT / 'alt-data.yml', run_id='ramp', environ={})
    assert config.delta == '0.01'
    assert config.cutoff == 'auto'
    assert config.seed == 7
    assert (config.n, config.count, config.precision_bits) == (1, 25, 128)
    assert config.signal == 'ramp'
