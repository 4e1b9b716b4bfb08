"""
Graph API endpoints
Grows preferential attachment graphs and reports degrees and edges
"""

from fastapi import APIRouter, HTTPException
from pydantic import BaseModel, Field
import numpy as np
import sys
import os

# Add parent directory to path
sys.path.append(os.path.dirname(os.path.dirname(os.path.dirname(__file__))))
from utils.pa_graph import Model, PaParams, attach_distribution, degree_counts, grow

router = APIRouter()

MAX_RETURNED_NODES = 100_000


class GrowRequest(BaseModel):
    model: Model = Model.B
    delta: float = Field(0.0, gt=-1.0)
    n: int = Field(..., ge=1, le=10_000_000)
    seed: int = 0
    include_degrees: bool = True
    include_edges: bool = False


@router.post("/grow")
async def grow_graph(request: GrowRequest):
    """Grow one graph and return its degree summary"""
    try:
        params = PaParams(model=request.model, delta=request.delta, n=request.n)
        graph = grow(params, request.seed)
        counts, _ = degree_counts(graph).as_dicts()

        result = {
            "model": params.model.value,
            "delta": params.delta,
            "n": graph.n,
            "seed": request.seed,
            "max_degree": graph.max_degree,
            "degree_counts": {str(k): v for k, v in counts.items()},
        }
        if graph.n <= MAX_RETURNED_NODES:
            if request.include_degrees:
                result["degrees"] = graph.degrees.tolist()
            if request.include_edges:
                result["edges"] = graph.edges

        return {"success": True, "graph": result}

    except ValueError as e:
        raise HTTPException(status_code=400, detail=str(e))
    except Exception as e:
        raise HTTPException(status_code=500, detail=f"Growth Error: {str(e)}")


class AttachRequest(BaseModel):
    model: Model = Model.A
    delta: float = Field(0.0, gt=-1.0)
    degrees: list[int] = Field(..., min_length=1)


@router.post("/attach-distribution")
async def next_attachment(request: AttachRequest):
    """Exact probabilities of the next attachment given a degree vector"""
    try:
        params = PaParams(model=request.model, delta=request.delta, n=len(request.degrees))
        probs = attach_distribution(np.array(request.degrees), params)
        return {
            "success": True,
            "probabilities": probs.tolist(),
            "self_loop": float(probs[-1]) if params.model == Model.B else 0.0,
        }
    except ValueError as e:
        raise HTTPException(status_code=400, detail=str(e))
    except Exception as e:
        raise HTTPException(status_code=500, detail=f"Attachment Error: {str(e)}")
