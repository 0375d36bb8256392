"""Bath spectral densities from classical energy-gap trajectories."""
__version__ = "0.1.0"

from .corrections import (CorrectionKind, EgelstaffNegativeWarning, correct_spectrum,  # noqa: E402
                          detailed_balance_G_from_J, egelstaff_correct, g_prefactor, j_prefactor,
                          reconstruct_correlator)
from .correlators import (CorrelationSeries, ThreeTimeGrid, normalize,  # noqa: E402
                          three_time_correlator, two_time_correlator)
from .diagnostics import (InvarianceReport, SignificanceReport,  # noqa: E402
                          rescale_experimental_profile, temperature_invariance,
                          three_point_significance)
from .exceptions import ValidationError  # noqa: E402
from .oracle import (LINEAR, BathModeSet, CouplingForm, Distribution,  # noqa: E402
                     analytic_alpha_boltzmann, analytic_alpha_wigner, analytic_J,
                     analytic_quantum_alpha, concatenated_trace, default_quadratic_form,
                     mc_correlator, mc_three_time, sample_boltzmann, sample_wigner)
from .spectral import (Spectrum, SpectrumKind, WindowSpec, apply_gaussian_window,  # noqa: E402
                       classical_tdcd, frequency_grid, sym_asym_split)
from .trajectory import GapTrajectory, TrajectoryStats, load_trajectory  # noqa: E402
from .units import PhysicalContext  # noqa: E402
