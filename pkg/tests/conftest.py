import hypothesis

# deterministic property tests: CI runs must be byte-reproducible
hypothesis.settings.register_profile(
    "adsheat",
    deadline=None,
    derandomize=True,
    max_examples=60,
)
hypothesis.settings.load_profile("adsheat")
