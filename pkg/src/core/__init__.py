"""Exact-arithmetic rigidity core: graphs, count matroids, geometry and rigidity matrices."""
