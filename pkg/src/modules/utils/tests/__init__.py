"""Tests for utils module"""
