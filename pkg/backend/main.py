"""
FastAPI Backend for pa-tail-lab
REST endpoints for preferential attachment simulation and tail-index estimation
"""

import logging

from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware
from api import embedding, estimation, experiments, graph, theory

import os
import sys

sys.path.append(os.path.dirname(os.path.dirname(__file__)))
from utils.settings_utils import get_log_level

logging.basicConfig(level=get_log_level(), format="%(asctime)s %(levelname)s %(name)s: %(message)s")

app = FastAPI(
    title="pa-tail-lab API",
    description="Preferential attachment graphs, degree laws, tail estimation and embedding diagnostics",
    version="1.0.0"
)

# CORS middleware
app.add_middleware(
    CORSMiddleware,
    allow_origins=["http://localhost:5173", "http://localhost:3000"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)

# Include routers
app.include_router(graph.router, prefix="/api/graph", tags=["Graph"])
app.include_router(theory.router, prefix="/api/theory", tags=["Theory"])
app.include_router(estimation.router, prefix="/api/estimate", tags=["Estimation"])
app.include_router(embedding.router, prefix="/api/embed", tags=["Embedding"])
app.include_router(experiments.router, prefix="/api/experiments", tags=["Experiments"])


@app.get("/")
async def root():
    return {
        "message": "pa-tail-lab API",
        "version": "1.0.0",
        "docs": "/docs"
    }


@app.get("/api/health")
async def health():
    return {"status": "healthy"}


if __name__ == "__main__":
    import uvicorn
    uvicorn.run(app, host="0.0.0.0", port=8000)
