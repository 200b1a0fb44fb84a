"""Tests for recipcas."""
