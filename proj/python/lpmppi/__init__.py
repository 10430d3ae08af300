# Copyright 2026 The lpmppi Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Sampling-based MPC with low-pass filtered perturbations."""

from ._core import (
    BiquadCascade,
    apply_filter,
    butterworth,
    colored_noise,
    compute_weights,
    config_from_yaml,
    fit_lowpass_spectrum,
    msgfd,
    mssd,
    periodogram,
    racing_cost,
    run_episode,
    run_sweep,
    sample,
    savitzky_golay,
)

__all__ = [
    "BiquadCascade",
    "apply_filter",
    "butterworth",
    "colored_noise",
    "compute_weights",
    "config_from_yaml",
    "fit_lowpass_spectrum",
    "msgfd",
    "mssd",
    "periodogram",
    "racing_cost",
    "run_episode",
    "run_sweep",
    "sample",
    "savitzky_golay",
]
