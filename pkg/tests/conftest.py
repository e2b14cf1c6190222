import hypothesis

# numpy-heavy properties routinely blow the default 200 ms deadline on
# cold caches; determinism comes from the fixed seeds, not the clock.
hypothesis.settings.register_profile(
    "fixedb", deadline=None, max_examples=60, print_blob=False
)
hypothesis.settings.load_profile("fixedb")
