"""Smoke test for the pylindkrylov extension module."""

import json
import math

import pylindkrylov as lk


def main():
    cfg = json.loads(lk.default_config())
    cfg["model"]["n"] = 8
    cfg["algorithm"]["max_steps"] = 10
    cfg["realizations"] = 2
    text = json.dumps(cfg)

    t = lk.lanczos(text)
    assert len(t) == 10, t
    lam = cfg["dissipation"]["lambda"]
    assert abs(t.a[0] - 1j * lam) < 1e-12
    assert abs(t.a[1] - 3j * lam) < 1e-12
    assert t.bound_check()["holds"]

    avg = lk.lanczos_average(text)
    assert avg["realizations"] == 2 and len(avg["coefficients"]) == 10

    chain = lk.ChainParams(0.5)
    traj = chain.tridiagonal(200).evolve([0.0, 0.5, 1.0])
    for k, t_ in zip(traj["k"], traj["t"]):
        assert abs(k - chain.k_complexity(t_)) < 1e-8
    assert abs(chain.dissipation_scales()["k_sat"] - 0.5) < 1e-14

    finite, large = lk.averaged_dissipator_eigenvalue(8, 2, 3, 4, 0.3)
    assert abs(finite - 1j * 0.5 * 0.09 * 3 * (1 - 3 / 8)) < 1e-12, finite

    assert abs(lk.spectral_function(1.0, 0.0, 0.0) - math.pi) < 1e-14
    assert all(c["passed"] for c in lk.verify_suite())

    try:
        bad = dict(cfg, model={"n": 7, "q": 4, "j": 1.0})
        lk.lanczos(json.dumps(bad))
    except ValueError:
        pass
    else:
        raise AssertionError("odd N accepted")
    print("pylindkrylov smoke test ok")


if __name__ == "__main__":
    main()
