"""Middleware package for the application.""" 