"""
Scenario runners, one class per configuration kind.

Every runner turns a resolved ``ScenarioConfig`` into per-SNR values:
``predict`` gives the predicted MSE columns, ``bounds`` the requested bound
columns and ``montecarlo`` the empirical MSE columns.
"""

import dataclasses
import logging
import math
from abc import ABC, abstractmethod
from typing import Callable, ClassVar, Dict, List, Type

import numpy as np

from ..bounds.bayesian import bcrlb, zzb
from ..bounds.crlb import crlb_joint, crlb_scalar, mcrlb_parametric_mean
from ..bounds.hcrb import hcrb_single_test_point
from ..esprit.moments import EspritScenario, esprit_crlb, mse_hat_esprit
from ..models.arrays import (
    AZIMUTH_SUPPORT, far_field_manifold, frequency_manifold, identity_manifold,
    near_field_manifold, ula_manifold
)
from ..models.beampattern import beampattern_grid
from ..models.geometry import ArrayGeometry, load_geometry, reference_array, uca_geometry
from ..models.manifold import ManifoldModel, MismatchPair, fix_parameters
from ..numeric.sampling import RngState
from ..predictor.bayesian import BetaPrior, mse_hat_map_bayes, mse_hat_ml_bayes
from ..predictor.mismatch import mse_hat_mml
from ..predictor.ml import mse_hat_ml_scalar
from ..predictor.nuisance import (
    build_nuisance_grid, mse_hat_ml_nuisance_full, mse_hat_ml_nuisance_min
)
from ..simulate.estimators import EspritBatchEstimator, MAPGridEstimator, MLGridEstimator
from ..simulate.grids import SearchGrid, omega_grid, sphere_grid, uniform_grid
from ..simulate.monte_carlo import run_bayesian_monte_carlo, run_monte_carlo
from ..utilities.error_handler import ConfigurationError
from .config import ScenarioConfig

Values = Dict[str, float]


class BaseScenario(ABC):
    """Common plumbing for the scenario kinds."""

    kind: ClassVar[str] = ""
    description: ClassVar[str] = ""
    angular: ClassVar[bool] = True

    def __init__(self, config: ScenarioConfig):
        self.config = config
        self.params = config.model
        self.tolerances = config.tolerances()
        self.logger = logging.getLogger(self.__class__.__name__)

    @property
    def amplitude(self) -> float:
        return abs(float(self.params["amplitude"]))

    def sigma2(self, snr_db: float) -> float:
        """Noise variance for ``SNR = |amplitude|^2 / sigma2``."""
        return self.amplitude ** 2 / 10.0 ** (snr_db / 10.0)

    @abstractmethod
    def predict(self, snr_db: float) -> Values:
        """Predicted MSE columns for one SNR."""

    @abstractmethod
    def montecarlo(self, snr_db: float, n_runs: int, seed: int, threads: int) -> Values:
        """Monte Carlo columns for one SNR."""

    def bound_methods(self) -> Dict[str, Callable[[float], float]]:
        return {}

    def bounds(self, snr_db: float, requested: List[str]) -> Values:
        methods = self.bound_methods()
        return {name: methods[name](snr_db) for name in requested}


class ScalarScenario(BaseScenario):
    """One free parameter: ML prediction, CRLB/HCRB and a grid ML Monte Carlo."""

    model: ManifoldModel
    theta_bar: float
    search_grid: SearchGrid

    def __init__(self, config: ScenarioConfig):
        super().__init__(config)
        self._estimator = None

    def predict(self, snr_db: float) -> Values:
        result = mse_hat_ml_scalar(self.model, self.theta_bar, self.sigma2(snr_db), self.tolerances)
        return {"mse_pred": result.mse}

    def bound_methods(self) -> Dict[str, Callable[[float], float]]:
        return {"crlb": self.crlb, "hcrb": self.hcrb}

    def crlb(self, snr_db: float) -> float:
        return crlb_scalar(self.model, self.theta_bar, self.sigma2(snr_db)).value

    def hcrb(self, snr_db: float) -> float:
        points = self.search_grid.points[:, 0]
        bound = hcrb_single_test_point(self.model, self.theta_bar, self.sigma2(snr_db),
                                       points[points != self.theta_bar])
        return bound.value

    @property
    def estimator(self) -> MLGridEstimator:
        if self._estimator is None:
            self._estimator = MLGridEstimator(self.model, self.search_grid)
        return self._estimator

    def montecarlo(self, snr_db: float, n_runs: int, seed: int, threads: int) -> Values:
        result = run_monte_carlo(self.model, self.theta_bar, self.sigma2(snr_db), self.estimator,
                                 n_runs, seed, threads)
        return {"mc_mse": result.mse, "mc_stderr": result.stderr, "n_runs": result.n_runs}


class FrequencyScenario(ScalarScenario):
    kind = "frequency"
    description = "Single complex tone, ML frequency estimate over [-pi, pi]"
    angular = False

    def __init__(self, config: ScenarioConfig):
        super().__init__(config)
        self.model = frequency_manifold(int(self.params["n_sensors"]), self.params["amplitude"])
        self.theta_bar = float(self.params["true_value"])
        self.search_grid = uniform_grid(*AZIMUTH_SUPPORT, config.grid["ml_points"], "frequency")


def _doa_geometry(scenario: BaseScenario) -> ArrayGeometry:
    path = scenario.params.get("geometry_file")
    if path:
        return load_geometry(scenario.config.resolve_path(path))
    return reference_array()


class DoaScenario(ScalarScenario):
    """Far-field DOA with one angle known."""

    free_index: ClassVar[int] = 0

    def __init__(self, config: ScenarioConfig):
        super().__init__(config)
        self.geometry = _doa_geometry(self)
        self.full_model = far_field_manifold(self.geometry, self.amplitude)
        self.truth = np.radians([self.params["azimuth_deg"], self.params["elevation_deg"]])
        known = 1 - self.free_index
        self.model = fix_parameters(self.full_model, self.free_index, {known: self.truth[known]})
        self.theta_bar = float(self.truth[self.free_index])
        lo, hi = self.model.supports[0]
        self.search_grid = uniform_grid(lo, hi, config.grid["ml_points"],
                                        self.model.param_names[0])
        if self.logger.isEnabledFor(logging.DEBUG):
            scan = beampattern_grid(self.model, self.theta_bar, self.search_grid.points)
            self.logger.debug(f"peak sidelobe {scan.peak_sidelobe_db:.2f} dB at "
                              f"{np.degrees(scan.peak_sidelobe_point).round(2).tolist()} deg")


class DoaAzimuthScenario(DoaScenario):
    kind = "doa3d-azimuth"
    description = "Table array, azimuth estimated with elevation known"
    free_index = 0


class DoaElevationScenario(DoaScenario):
    kind = "doa3d-elevation"
    description = "Table array, elevation estimated with azimuth known"
    free_index = 1


class DoaJointScenario(BaseScenario):
    kind = "doa3d-joint"
    description = "Table array, joint azimuth-elevation ML with the other angle as nuisance"

    def __init__(self, config: ScenarioConfig):
        super().__init__(config)
        self.geometry = _doa_geometry(self)
        self.model = far_field_manifold(self.geometry, self.amplitude)
        self.truth = np.radians([self.params["azimuth_deg"], self.params["elevation_deg"]])
        self.index = 0 if self.params["estimate"] == "azimuth" else 1
        nuisance_index = 1 - self.index
        self.known_model = fix_parameters(self.model, self.index,
                                          {nuisance_index: self.truth[nuisance_index]})
        settings = config.nuisance
        self.nuisance_grid = build_nuisance_grid(
            self.truth[nuisance_index], settings["e_max"], settings["n_log"],
            settings["lower_floor"], support=self.model.supports[nuisance_index])
        self.form = config.prediction["nuisance_form"]
        limit = config.prediction["max_grid"]
        if self.form == "full" and self.nuisance_grid.size > limit:
            raise ConfigurationError(
                f"full nuisance form allows at most {limit} grid points but the grid has "
                f"{self.nuisance_grid.size}; lower nuisance.n_log to {(limit - 1) // 2} or use "
                f"nuisance_form = \"min\"", config_key="nuisance.n_log")
        self._estimator = None

    def predict(self, snr_db: float) -> Values:
        sigma2 = self.sigma2(snr_db)
        theta1 = float(self.truth[self.index])
        known = mse_hat_ml_scalar(self.known_model, theta1, sigma2, self.tolerances).mse
        if self.form == "full":
            prediction = self.config.prediction
            result = mse_hat_ml_nuisance_full(
                self.model, theta1, self.nuisance_grid, sigma2,
                mc_samples=prediction["mc_samples"],
                rng=RngState(self.config.montecarlo["seed"] or 0),
                tols=self.tolerances, max_grid=prediction["max_grid"], estimate_index=self.index)
            return {"mse_pred": result.mse, "mse_pred_stderr": result.stderr,
                    "mse_pred_known": known}
        result = mse_hat_ml_nuisance_min(self.model, theta1, self.nuisance_grid, sigma2,
                                         self.tolerances, estimate_index=self.index)
        return {"mse_pred": result.mse, "mse_pred_known": known}

    def bound_methods(self) -> Dict[str, Callable[[float], float]]:
        return {"crlb": self.crlb, "hcrb": self.hcrb}

    def crlb(self, snr_db: float) -> float:
        return crlb_joint(self.model, self.truth, self.sigma2(snr_db))[self.index].value

    def hcrb(self, snr_db: float) -> float:
        return hcrb_single_test_point(self.known_model, float(self.truth[self.index]),
                                      self.sigma2(snr_db)).value

    def montecarlo(self, snr_db: float, n_runs: int, seed: int, threads: int) -> Values:
        if self._estimator is None:
            grid = sphere_grid(self.config.grid["sphere_elevations"],
                               self.config.grid["sphere_density"])
            self._estimator = MLGridEstimator(self.model, grid)
        result = run_monte_carlo(self.model, self.truth, self.sigma2(snr_db), self._estimator,
                                 n_runs, seed, threads, component=self.index)
        return {"mc_mse": result.mse, "mc_stderr": result.stderr, "n_runs": result.n_runs}


class NearFieldMismatchScenario(BaseScenario):
    kind = "nearfield-mismatch"
    description = "UCA with a near-field source, ML under a far-field model"

    def __init__(self, config: ScenarioConfig):
        super().__init__(config)
        geometry = uca_geometry(int(self.params["n_sensors"]), float(self.params["radius"]))
        self.true_model = near_field_manifold(geometry, float(self.params["range"]),
                                              self.amplitude)
        far = far_field_manifold(geometry, self.amplitude)
        self.assumed_model = fix_parameters(far, 0, {1: math.pi / 2})
        self.theta_bar = math.radians(self.params["azimuth_deg"])
        self.search_grid = uniform_grid(*AZIMUTH_SUPPORT, config.grid["ml_points"], "azimuth")
        self._estimator = None

    def pair(self, snr_db: float) -> MismatchPair:
        sigma2 = self.sigma2(snr_db)
        return MismatchPair(self.true_model, self.assumed_model, sigma2, sigma2)

    def predict(self, snr_db: float) -> Values:
        return {"mse_pred": mse_hat_mml(self.pair(snr_db), self.theta_bar, self.tolerances).mse}

    def bound_methods(self) -> Dict[str, Callable[[float], float]]:
        return {
            "crlb": lambda snr: crlb_scalar(self.assumed_model, self.theta_bar,
                                            self.sigma2(snr)).value,
            "mcrlb": lambda snr: mcrlb_parametric_mean(self.pair(snr), self.theta_bar).value,
            "hcrb": self.hcrb,
        }

    def hcrb(self, snr_db: float) -> float:
        points = self.search_grid.points[:, 0]
        return hcrb_single_test_point(self.true_model, self.theta_bar, self.sigma2(snr_db),
                                      points[points != self.theta_bar]).value

    def montecarlo(self, snr_db: float, n_runs: int, seed: int, threads: int) -> Values:
        if self._estimator is None:
            self._estimator = MLGridEstimator(self.assumed_model, self.search_grid)
        result = run_monte_carlo(self.true_model, self.theta_bar, self.sigma2(snr_db),
                                 self._estimator, n_runs, seed, threads)
        return {"mc_mse": result.mse, "mc_stderr": result.stderr, "n_runs": result.n_runs}


class EspritUlaScenario(BaseScenario):
    kind = "esprit-ula"
    description = "Half-wavelength ULA, lag-one ESPRIT with the Gaussian-fit prediction"

    def __init__(self, config: ScenarioConfig):
        super().__init__(config)
        self.phi_bar = math.radians(self.params["azimuth_deg"])
        self.n_sensors = int(self.params["n_sensors"])

    def scenario(self, snr_db: float) -> EspritScenario:
        return EspritScenario(self.n_sensors, complex(self.params["amplitude"]), self.phi_bar,
                              self.sigma2(snr_db))

    def predict(self, snr_db: float) -> Values:
        return {"mse_pred": mse_hat_esprit(self.scenario(snr_db), self.tolerances).mse}

    def bound_methods(self) -> Dict[str, Callable[[float], float]]:
        return {"crlb": lambda snr: esprit_crlb(self.scenario(snr)).value}

    def montecarlo(self, snr_db: float, n_runs: int, seed: int, threads: int) -> Values:
        scenario = self.scenario(snr_db)
        result = run_monte_carlo(scenario.model, self.phi_bar, scenario.sigma_w2,
                                 EspritBatchEstimator(), n_runs, seed, threads)
        return {"mc_mse": result.mse, "mc_stderr": result.stderr, "n_runs": result.n_runs}


class BayesianUlaScenario(BaseScenario):
    kind = "bayesian-ula"
    description = "Half-wavelength ULA with a Beta prior: MAP and ML, ZZB and BCRLB"

    def __init__(self, config: ScenarioConfig):
        super().__init__(config)
        self.n_sensors = int(self.params["n_sensors"])
        self.model = ula_manifold(self.n_sensors, self.params["amplitude"])
        self.prior = BetaPrior(float(self.params["prior_shape"]))
        self.spacing = float(config.grid["prior_spacing"])
        self._grid = None

    def predict(self, snr_db: float) -> Values:
        sigma2 = self.sigma2(snr_db)
        return {
            "mse_pred": mse_hat_map_bayes(self.model, self.prior, sigma2, self.tolerances,
                                          self.spacing),
            "mse_pred_ml": mse_hat_ml_bayes(self.model, self.prior, sigma2, self.tolerances,
                                            self.spacing),
        }

    def bound_methods(self) -> Dict[str, Callable[[float], float]]:
        return {
            "zzb": lambda snr: zzb(self.model, self.prior, self.sigma2(snr)).value,
            "bcrlb": lambda snr: bcrlb(self.prior, self.amplitude ** 2 / self.sigma2(snr),
                                       self.n_sensors, self.spacing).value,
        }

    def montecarlo(self, snr_db: float, n_runs: int, seed: int, threads: int) -> Values:
        if self._grid is None:
            self._grid = omega_grid(self.config.grid["omega_points"])
        sigma2 = self.sigma2(snr_db)
        estimators = {
            "map": MAPGridEstimator(self.model, self.prior, self._grid, sigma2),
            "ml": MLGridEstimator(self.model, self._grid),
        }
        results = run_bayesian_monte_carlo(self.model, self.prior, sigma2, estimators,
                                           n_runs, seed, threads)
        return {
            "mc_mse": results["map"].mse, "mc_stderr": results["map"].stderr,
            "n_runs": n_runs,
            "mc_mse_ml": results["ml"].mse, "mc_stderr_ml": results["ml"].stderr,
        }


class CustomScenario(ScalarScenario):
    kind = "custom"
    description = "Identity, single-tone or file-geometry model with a user support"
    angular = False

    def __init__(self, config: ScenarioConfig):
        super().__init__(config)
        manifold = self.params["manifold"]
        if manifold == "identity":
            model = identity_manifold()
        elif manifold == "frequency":
            model = frequency_manifold(int(self.params["n_sensors"]), self.params["amplitude"])
        else:
            geometry = load_geometry(config.resolve_path(self.params["geometry_file"]))
            model = fix_parameters(far_field_manifold(geometry, self.amplitude), 0,
                                   {1: math.radians(self.params["elevation_deg"])})
        if self.params["support"] is not None:
            model = dataclasses.replace(model, supports=(tuple(self.params["support"]),))
        self.model = model
        self.theta_bar = float(self.params["true_value"])
        self.search_grid = uniform_grid(*model.supports[0], config.grid["ml_points"],
                                        model.param_names[0])


SCENARIOS: Dict[str, Type[BaseScenario]] = {
    cls.kind: cls for cls in (
        FrequencyScenario, DoaAzimuthScenario, DoaElevationScenario, DoaJointScenario,
        NearFieldMismatchScenario, EspritUlaScenario, BayesianUlaScenario, CustomScenario,
    )
}


def build_scenario(config: ScenarioConfig) -> BaseScenario:
    return SCENARIOS[config.kind](config)
