"""
估计误差度量
"""

from typing import Sequence

import numpy as np

from estimator.ls_estimator import EstimationResult
from numerics.transforms import as_complex_vector
from utils.errors import InvalidArgumentError


def mse(true_cfrs: Sequence, estimates: EstimationResult) -> float:
    """
    单次试验的 MSE: (1/(U·N)) Σ_u Σ_k |h_{F,u}(k) − ĥ_{F,u}(k)|²

    Args:
        true_cfrs: 每个发射机的真实 CFR
        estimates: 估计结果

    Returns:
        非负实数
    """
    truth = as_complex_vector(np.asarray(true_cfrs), "true_cfrs")
    est = np.asarray(estimates.per_tx_cfr)
    if truth.ndim != 2 or truth.shape != est.shape:
        raise InvalidArgumentError(f"真实 CFR 维度 {truth.shape} 与估计维度 {est.shape} 不一致")
    return float(np.mean(np.abs(truth - est) ** 2))


def mse_per_trial(true_cfrs, estimates: EstimationResult) -> np.ndarray:
    """
    成批试验的逐次 MSE

    Args:
        true_cfrs: 形状 (T, U, N) 的真实 CFR
        estimates: per_tx_cfr 形状相同的成批估计结果

    Returns:
        长度为 T 的 MSE 数组，第 t 个元素等于 mse(true_cfrs[t], 第 t 次估计)
    """
    truth = as_complex_vector(np.asarray(true_cfrs), "true_cfrs")
    est = np.asarray(estimates.per_tx_cfr)
    if truth.ndim != 3 or truth.shape != est.shape:
        raise InvalidArgumentError(f"真实 CFR 维度 {truth.shape} 与估计维度 {est.shape} 不一致")
    err = np.abs(truth - est) ** 2
    return np.mean(err.reshape(err.shape[0], -1), axis=1)
