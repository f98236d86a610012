"""SINR connectivity: MST link scheduling with power control."""
