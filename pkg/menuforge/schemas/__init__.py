"""CLI report payloads"""
