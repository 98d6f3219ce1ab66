"""Four-wave-mixing model of correlated Stokes/anti-Stokes Raman scattering."""
from ._accel import get_backend, set_backend, use_backend
from .kernel import FAMILY_TABLE, KernelFrequencies, SignSignature, TermFamily, f_freq_AS, f_time, windowed_fourier
from .modes import (CouplingConstants, DispersionModel, FwmTerm, OpticalMode, RamanTerm, alpha_bar,
                    enumerate_first_order, enumerate_zeroth_order, finite_volume_factor, phase_mismatch,
                    raman_amplitude, refractive_index)
from .phonon import PhononMode, damped_commutator, transient_envelope
from .spectra import (FitOptions, FitResult, MeasuredSpectrum, SpectrumGrid, evaluate_spectrum, fit,
                      load_spectrum, residual_profile)
from .susceptibility import (SusceptibilityParams, asymmetry_ratio, chi3_electronic, chi3_raman, chi3_total,
                             diamond_params, find_minimum, phase_sweep)
from .units import AngularFrequency, DecayRate, Wavenumber, lifetime_to_decay_wavenumber, wavenumber_to_angular

__version__ = "0.1.0"
