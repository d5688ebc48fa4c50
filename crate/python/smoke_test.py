"""Smoke test for the Python bindings.

Build first with `maturin develop -m crates/python/Cargo.toml`.
"""

import clandestine_ca_py as ca


def main():
    m = ca.Rule.builtin("min")
    assert m.radius == 1
    words = ca.image_language(m, 3, 1)
    assert len(words) == 7 and "101" not in words

    r110 = ca.Rule.builtin("elementary:110")
    assert ca.check_sft_order2(ca.build_tilde(r110), 1, 4)
    spread = ca.add_spreading(r110)
    assert len(spread.alphabet) == 3
    assert len(ca.build_delta(spread).alphabet) == 69

    first, killer, sync = ca.firing_outcome(3, 20)
    assert first == 7 and killer is None and sync
    assert ca.orbit_period_schema(3, 0) == "# B^3"

    assert ca.recognize_word("B") is not None
    assert ca.classify_config("B", "", "B") == "NO_SHARPS"
    assert ca.classify_config("B", "κ", "B") is None

    ok, report = ca.run_suite("tilde-sft2")
    assert ok, report
    print("smoke test passed")


if __name__ == "__main__":
    main()
