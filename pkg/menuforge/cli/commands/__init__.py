"""CLI Command Modules"""
