"""digsp: spectral analysis toolkit for directed graphs.

Builds multiple graph Fourier bases for arbitrary digraphs: three from the
polar decomposition of the adjacency (common-in-link, common-out-link, and
in-flow variation) and one from its complex Schur form, which exists even
when the adjacency is defective.  Ships generators for the graph families the
bases are studied on, a diffusion simulator, and spectrum-localization
analysis with CSV and figure output.
"""

from .analysis import (
    DEFAULT_STEPS,
    DiffusionTrace,
    ExperimentThresholds,
    LocalizationReport,
    LocalizationRow,
    MbcgRun,
    MbcgSummary,
    StructureReport,
    TvDivergencePair,
    adjacency_tv,
    diffuse,
    localization,
    mblock_structure_check,
    merge_localization,
    near_equal_tv_divergence,
    run_mbcg_experiment,
    spectrum_of,
    summarize_mbcg,
    unnormalized_tv,
    write_trace_csv,
)
from .basis import BasisKind, GftBasis
from .errors import DigspError, NumericalError, ValidationError
from .graphs import (
    Digraph,
    MBlockSpec,
    as_signal,
    gen_directed_cycle,
    gen_directed_path,
    gen_directed_torus,
    gen_mblock_cyclic,
    gen_random_digraph,
    random_signal,
)
from .gst import GstTransform, gst_build, gst_forward, gst_inverse, shift_in_gst_domain
from .io import (
    mm_read,
    mm_write,
    read_matrix_market,
    read_signal_csv,
    write_basis_csv,
    write_basis_vectors,
    write_matrix_market,
    write_signal_csv,
    write_spectrum_csv,
)
from .linalg import (
    ComplexSchurFactors,
    SvdFactors,
    SymEigFactors,
    psd_sqrt,
    schur_complex,
    svd,
    sym_eig,
)
from .polar import (
    CorrespondenceReport,
    PolarFactors,
    common_inlink_basis,
    common_outlink_basis,
    eigenvalue_correspondence,
    inflow_basis,
    polar_decompose,
)
from .symmetrize import (
    Symmetrization,
    SymmetrizationKind,
    bibliographic_coupling,
    bibliometric,
    co_citation,
    connected_components,
    is_connected,
    quadratic_variation,
)

__version__ = "0.1.0"
