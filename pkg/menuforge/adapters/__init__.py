"""Adapters Package - file formats in and out of the domain models"""
