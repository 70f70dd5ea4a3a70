"""Verification harness: checks, reports, IO and CLI."""
