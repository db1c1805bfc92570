from .baseline import MeanBaseline
from .forest import RandomForestRegressor
from .scaler import ZScoreScaler
from .serialize import load_model, model_to_dict, save_model
from .svr import LinearEpsilonSVR, solve_svr_dual, svr_primal_objective

__all__ = [
    "LinearEpsilonSVR",
    "MeanBaseline",
    "RandomForestRegressor",
    "ZScoreScaler",
    "load_model",
    "model_to_dict",
    "save_model",
    "solve_svr_dual",
    "svr_primal_objective",
]
