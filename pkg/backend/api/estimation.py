"""
Estimation API endpoints
Hill, KS distance and minimum-distance threshold selection on a degree sample
"""

from fastapi import APIRouter, HTTPException
from pydantic import BaseModel, Field
from typing import List, Optional
import numpy as np
import sys
import os

# Add parent directory to path
sys.path.append(os.path.dirname(os.path.dirname(os.path.dirname(__file__))))
from utils.tail_estimation import (
    DEFAULT_K_MIN, SortedSample, alpha_hat, b_scale, hill, kn_default, ks_distance,
    min_distance_select, tail_empirical
)

router = APIRouter()


class EstimateRequest(BaseModel):
    values: List[float] = Field(..., min_length=2)
    method: str = "mindist"  # hill, mindist
    k: Optional[int] = None
    kn_auto: bool = False
    k_min: int = Field(DEFAULT_K_MIN, ge=1)
    include_curve: bool = False


@router.post("/tail-index")
async def estimate_tail_index(request: EstimateRequest):
    """Estimate the tail index of a sample"""
    try:
        sample = SortedSample.from_values(request.values)

        if request.method == "hill":
            k = kn_default(sample.n) if request.kn_auto else request.k
            if k is None:
                raise ValueError("method 'hill' requires k or kn_auto")
            return {
                "success": True,
                "n": sample.n,
                "k": k,
                "hill": hill(sample, k),
                "alpha_hat": alpha_hat(sample, k),
                "d_k": ks_distance(sample, k),
            }

        if request.method == "mindist":
            fit = min_distance_select(sample, request.k_min)
            result = {
                "success": True,
                "n": sample.n,
                "k": fit.k_star,
                "alpha_hat": fit.alpha_hat,
                "d_k": fit.d_min,
                "threshold": fit.threshold,
            }
            if request.include_curve:
                result["curve"] = fit.to_frame().to_dict(orient="records")
            return result

        raise ValueError(f"unknown method '{request.method}'")

    except ValueError as e:
        raise HTTPException(status_code=400, detail=str(e))
    except Exception as e:
        raise HTTPException(status_code=500, detail=f"Estimation Error: {str(e)}")


class TailMeasureRequest(BaseModel):
    values: List[float] = Field(..., min_length=2)
    k_n: Optional[int] = None
    y: List[float] = Field(default_factory=lambda: [1.0, 2.0, 4.0])
    delta: Optional[float] = None


@router.post("/tail-measure")
async def tail_measure(request: TailMeasureRequest):
    """Tail empirical measure at y, with the y^{-(2+delta)} limit when delta is given"""
    try:
        sample = SortedSample.from_values(request.values)
        k_n = request.k_n or kn_default(sample.n)
        ys = np.array(request.y, dtype=float)
        result = {
            "success": True,
            "k_n": k_n,
            "y": ys.tolist(),
            "empirical": tail_empirical(sample, k_n, ys).tolist(),
        }
        if request.delta is not None:
            result["limit"] = (ys ** -(2.0 + request.delta)).tolist()
            result["b_scale"] = b_scale(request.delta, sample.n / k_n)
        return result
    except ValueError as e:
        raise HTTPException(status_code=400, detail=str(e))
    except Exception as e:
        raise HTTPException(status_code=500, detail=f"Tail Measure Error: {str(e)}")
