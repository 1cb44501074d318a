"""Compare convergence rates of fixed-point iterations under several definitions."""

from .adversary import (SynthesisReport, demonstrate_equal, demonstrate_inconsistency,
                        synthesize_equal_bounds, synthesize_prop1)
from .comparators import (BoundCheck, BoundTrace, EstimatorConfig, TailEstimate, Verdict,
                          compare_berinde_def25, compare_berinde_def27, compare_popescu,
                          compare_rhoades, compare_zalinescu, tail_estimate, validate_bounds)
from .config import ExperimentConfig, load_config
from .errors import (BoundViolationError, ConfigError, EvaluationError, ExprSyntaxError,
                     GenerationError, InputError, ItercompareError)
from .expr import parse_expr
from .iterations import (OperatorSpec, Scenario, ScheduleSpec, SchemeSpec, SequenceScenario,
                         apply_operator, closed_form_fixed_point, generate)
from .metric import ErrorTrace, Trace, distance, error_trace, ratio_trace, xratio
from .report import ReportRecord, emit, run_experiment

__version__ = "0.1.0"
