from aware_stl.synthesis.case_study import (
    REFERENCE_COSTS,
    Variant,
    case_study_problem,
    case_study_spec,
    region_a,
    region_b,
    region_c,
)
from aware_stl.synthesis.problem import (
    SynthesisProblem,
    SynthesisResult,
    SynthesisSummary,
    build,
    build_encoded,
    synthesize,
)
from aware_stl.synthesis.problem_file import ProblemFile, load_problem
from aware_stl.synthesis.system import LinearSystem, double_integrator

__all__ = [
    "REFERENCE_COSTS",
    "LinearSystem",
    "ProblemFile",
    "SynthesisProblem",
    "SynthesisResult",
    "SynthesisSummary",
    "Variant",
    "build",
    "build_encoded",
    "case_study_problem",
    "case_study_spec",
    "double_integrator",
    "load_problem",
    "region_a",
    "region_b",
    "region_c",
    "synthesize",
]
