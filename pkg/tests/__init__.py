"""Taffin Test Suite"""
