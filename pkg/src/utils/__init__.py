"""Shared configuration, logging, quadrature and superoperator helpers."""
