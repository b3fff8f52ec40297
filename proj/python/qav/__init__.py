"""Anonymous-veto protocol simulator: python surface over the C++ core."""

try:
    from ._core import (
        Config,
        ConfigError,
        InternalError,
        attack_experiment,
        average_fidelity_numeric,
        efficiency_table,
        fidelity_closed_form,
        fidelity_sweep,
        iteration_profile,
        kraus_operators,
        random_votes,
        run,
        state_amplitudes,
        success_experiment,
    )
except ImportError:  # dev layout: the extension sits on sys.path, not in the package
    from _core import (
        Config,
        ConfigError,
        InternalError,
        attack_experiment,
        average_fidelity_numeric,
        efficiency_table,
        fidelity_closed_form,
        fidelity_sweep,
        iteration_profile,
        kraus_operators,
        random_votes,
        run,
        state_amplitudes,
        success_experiment,
    )

__all__ = [
    "Config",
    "ConfigError",
    "InternalError",
    "attack_experiment",
    "average_fidelity_numeric",
    "efficiency_table",
    "fidelity_closed_form",
    "fidelity_sweep",
    "iteration_profile",
    "kraus_operators",
    "random_votes",
    "run",
    "state_amplitudes",
    "success_experiment",
]
