"""
Theory API endpoints
Limiting degree law, expected tail counts and the concentration diagnostic
"""

from fastapi import APIRouter, HTTPException
from pydantic import BaseModel, Field
from typing import List, Optional
import numpy as np
import sys
import os

# Add parent directory to path
sys.path.append(os.path.dirname(os.path.dirname(os.path.dirname(__file__))))
from utils.degree_law import TheoreticalLaw, concentration_stat, epsilon_bound_report, expected_tail_counts
from utils.pa_graph import Model, degree_counts

router = APIRouter()


@router.get("/degree-law")
async def degree_law(delta: float = 0.0, kmax: int = 20):
    """p_k and p_{>k} for k = 1..kmax"""
    try:
        if kmax < 1 or kmax > 100_000:
            raise ValueError("kmax must lie in [1, 100000]")
        law = TheoreticalLaw(delta=delta)
        return {
            "success": True,
            "delta": delta,
            "tail_index": law.tail_index,
            "table": law.table(kmax).to_dict(orient="records"),
        }
    except ValueError as e:
        raise HTTPException(status_code=400, detail=str(e))
    except Exception as e:
        raise HTTPException(status_code=500, detail=f"Degree Law Error: {str(e)}")


class ExpectedCountsRequest(BaseModel):
    model: Model = Model.A
    delta: float = Field(0.0, gt=-1.0)
    n: int = Field(..., ge=1, le=100_000)
    kmax: int = Field(10, ge=1, le=1_000)
    every: int = Field(1, ge=1)
    include_bound: bool = False


@router.post("/expected-counts")
async def expected_counts(request: ExpectedCountsRequest):
    """mu_{>k}(m) and eps_{>k}(m) from the forward recursion"""
    try:
        counts = expected_tail_counts(request.model, request.delta, request.n, request.kmax)
        result = {
            "success": True,
            "model": request.model.value,
            "final": counts.mu[-1].tolist(),
            "table": counts.to_frame(request.every).to_dict(orient="records"),
        }
        if request.include_bound:
            if request.model != Model.A:
                raise ValueError("the epsilon bound is stated for Model A")
            result["bound"] = epsilon_bound_report(request.delta, request.n, request.kmax)
        return result
    except ValueError as e:
        raise HTTPException(status_code=400, detail=str(e))
    except Exception as e:
        raise HTTPException(status_code=500, detail=f"Expected Counts Error: {str(e)}")


class ConcentrationRequest(BaseModel):
    delta: float = Field(0.0, gt=-1.0)
    degrees: List[int] = Field(..., min_length=2)
    n: Optional[int] = None


@router.post("/concentration")
async def concentration(request: ConcentrationRequest):
    """max_k |N_{>k}(n) - n p_{>k}| of a degree vector, raw and normalized"""
    try:
        n = request.n or len(request.degrees)
        gap, normalized = concentration_stat(degree_counts(np.array(request.degrees)), n, request.delta)
        return {"success": True, "n": n, "gap": gap, "normalized": normalized}
    except ValueError as e:
        raise HTTPException(status_code=400, detail=str(e))
    except Exception as e:
        raise HTTPException(status_code=500, detail=f"Concentration Error: {str(e)}")
