from hypothesis import HealthCheck, settings

# numerical properties, not I/O: no deadline, keep the example budget modest
settings.register_profile(
    "numerics",
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("numerics")
