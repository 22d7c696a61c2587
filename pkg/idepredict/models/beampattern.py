"""Bartlett beampattern of a mean model."""

from dataclasses import dataclass

import numpy as np

from .manifold import ManifoldModel, ParamLike

FLOOR_DB = -300.0


@dataclass(frozen=True)
class BeampatternScan:
    """Beampattern over a set of parameter points."""
    points: np.ndarray
    response_db: np.ndarray
    peak_sidelobe_db: float
    peak_sidelobe_point: np.ndarray


def _to_db(ratio: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore"):
        return np.maximum(20.0 * np.log10(ratio), FLOOR_DB)


def beampattern(model: ManifoldModel, steer: ParamLike, eval_point: ParamLike) -> float:
    """
    Normalized response ``20 log10(|m(steer)^H m(eval)| / ||m(steer)||^2)`` in dB.

    Equals 0 dB at ``eval_point == steer`` for constant-modulus models.
    """
    w = model.mean(steer)
    response = np.abs(np.vdot(w, model.mean(eval_point))) / np.real(np.vdot(w, w))
    return float(_to_db(np.asarray(response)))


def beampattern_grid(model: ManifoldModel, steer: ParamLike, points: np.ndarray,
                     main_lobe_radius: float = 0.5) -> BeampatternScan:
    """
    Beampattern over ``points`` (shape ``(G, J)``) and its highest sidelobe.

    The sidelobe search skips every point within ``main_lobe_radius``
    (Euclidean distance in parameter space, radians) of the steering point.
    """
    points = np.asarray(points, dtype=float).reshape(-1, model.param_dim)
    center = model.as_vector(steer)
    w = model.mean(center)
    responses = np.abs(model.mean_batch(points) @ np.conj(w)) / np.real(np.vdot(w, w))
    response_db = _to_db(responses)

    outside = np.linalg.norm(points - center[None, :], axis=1) > main_lobe_radius
    if not np.any(outside):
        return BeampatternScan(points, response_db, FLOOR_DB, center)
    candidates = np.nonzero(outside)[0]
    best = candidates[np.argmax(responses[candidates])]
    return BeampatternScan(points, response_db, float(response_db[best]), points[best])
