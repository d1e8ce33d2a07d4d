"""Smoke test for the `tandem` extension module.

Build and install first, e.g.::

    maturin develop -m crates/py/Cargo.toml --features extension-module
    python python/smoke_test.py
"""

import pathlib

import tandem

ROOT = pathlib.Path(__file__).resolve().parent.parent


def main():
    s = tandem.SequenceSet.construct(["1/3", "1/3", "1/3", "2/3", "2/3"])
    assert s.period == 27 and len(s) == 5
    assert s.sequences()[2] == "1" * 9 + "0" * 18
    assert s.is_shift_invariant(0)
    assert s.throughput(2, "forward") == "2/27"

    net = tandem.Network.from_json((ROOT / "configs" / "example1.json").read_text())
    assert net.nodes == 4 and net.rates == ["4/27", "4/27"]
    thirds = ["1/3"] * 4
    assert net.achievable(thirds, ["4/27", "4/27"])
    assert not net.achievable(thirds, ["5/27", "5/27"])
    seq = tandem.SequenceSet.construct(thirds)
    assert net.simulate(seq, [0, 5, 13, 22], ["4/27", "4/27"], seed=1)
    try:
        net.simulate(seq, [0, 5, 13, 22], ["5/27", "5/27"])
    except tandem.TandemError as e:
        assert "link" in str(e)
    else:
        raise AssertionError("5/27 should be infeasible")

    rate, witness = net.max_symmetric_rate("capacity")
    assert abs(rate - 4 / 27) < 1e-12, rate
    rate, _ = net.max_symmetric_rate("slotted")
    assert abs(rate - 0.1058) < 0.002, rate
    edge = net.boundary("capacity", 4)
    assert abs(edge[0][1] - 1 / 3) < 1e-12 and abs(edge[-1][0] - 1 / 3) < 1e-12

    cw = tandem.rs_encode_message(11, [3, 1, 4], 6)
    cw[0] = cw[4] = cw[5] = None
    assert tandem.rs_decode_message(11, cw, 3) == [3, 1, 4]

    print("python smoke test: ok")


if __name__ == "__main__":
    main()
