"""Acceptance suite: one test per criterion, each printing a PASS line.

Run with ``pytest tests/test_acceptance.py -v -s``.  The minor-formula
cross-check additionally emits reports/phi_constant_table.json with the
measured per-weight constants.
"""

import itertools
import json
import pathlib
import time

import pytest

from stheta.family import (FData, MomentChar, ToyCMContext, UnitCharacter,
                           build_F, doubled_signature, measure_moment,
                           norm_knu, sample_points, kummer_certify)
from stheta.padic import RingCtx
from stheta.pullback import (build_restriction, check_pure_commutation,
                             extend_via_weyl, phi_subgroup, res_series)
from stheta.series import (MonomialSeries, ShiftedSeries, VarLabel,
                           random_series, variable_labels)
from stheta.symmetrizer import lcan_expand, lcan_ordered, functional_product
from stheta.theta import (CharacterZeta, congruence_sweep, parallel_map,
                          phi_equivalence_report, phi_oracle)
from stheta.weights import (PAdicCharacterApprox, PartitionedSignature,
                            Signature, Weight, is_dominant, is_pure,
                            is_symmetric, is_sum_symmetric,
                            signature_partitions, sum_symmetric_weights,
                            symmetric_weights, weight_congruent)
from stheta.cli import run

REPORTS = pathlib.Path(__file__).resolve().parents[1] / "reports"

SIG22 = Signature(((2, 2),))
SIG11 = Signature(((1, 1),))
VARS22 = variable_labels(SIG22)
L13, L14, L23, L24 = VARS22
PART_11_11 = PartitionedSignature((SIG11, SIG11))


def sweep_signatures(n_max=4, places=2):
    """Signatures with nonzero variable sets for the exhaustive sweeps."""
    out = []
    for n in range(2, n_max + 1):
        pairs = [(a, n - a) for a in range(1, n)]
        for r in range(1, places + 1):
            for combo in itertools.product(pairs, repeat=r):
                out.append(Signature(combo))
    return out


def test_criterion_1_worked_example_bit_exact():
    start = time.time()
    lam = Weight(SIG22, ((2, 0, 2, 0),))
    lamp = Weight(SIG22, ((1, 1, 1, 1),))

    assert lcan_expand(lam).sorted_terms() == [((L13, L13), 1)]
    assert lcan_expand(lamp).sorted_terms() == [((L13, L24), 1),
                                                ((L14, L23), -1)]

    ctx = RingCtx(5, 4, n_bound=4)
    witness = ShiftedSeries.shifted_power(ctx, VARS22, {L14: 1, L23: 1})
    assert check_pure_commutation(lam, PART_11_11, witness)["commutes"]
    assert not check_pure_commutation(lamp, PART_11_11, witness)["commutes"]

    elapsed = time.time() - start
    assert elapsed < 1.0
    print(f"\nACCEPTANCE 1: PASS - worked example bit-exact ({elapsed:.3f}s)")


def criterion_2_weights():
    for sig in sweep_signatures(n_max=4, places=2):
        for kappa in sum_symmetric_weights(sig, 4):
            yield kappa


def test_criterion_2_unit_coefficients_exhaustive():
    start = time.time()
    checked = 0
    for kappa in criterion_2_weights():
        ordered = lcan_ordered(kappa)
        assert all(c in (-1, 1) for c in ordered.values()), kappa
        collapsed = lcan_expand(kappa)
        assert all(c in (-1, 1) for c in collapsed.terms.values()), kappa
        checked += 1
    elapsed = time.time() - start
    assert elapsed < 300
    print(f"\nACCEPTANCE 2: PASS - coefficients in {{0,+-1}} for {checked} "
          f"sum-symmetric weights ({elapsed:.1f}s)")


def test_criterion_3_functional_multiplicativity():
    start = time.time()
    held, vanishing_pairs = 0, 0
    for sig in sweep_signatures(n_max=4, places=2):
        weights = list(sum_symmetric_weights(sig, 4))
        by_depth = {}
        for kappa in weights:
            by_depth.setdefault(is_sum_symmetric(kappa)[1], []).append(kappa)
        for ka, kb in itertools.combinations_with_replacement(weights, 2):
            depth = is_sum_symmetric(ka)[1] + is_sum_symmetric(kb)[1]
            if depth > 4:
                continue
            fa, fb = lcan_expand(ka), lcan_expand(kb)
            product = functional_product(fa, fb)
            expected = lcan_expand(ka.mul(kb))
            if fa.is_zero() or fb.is_zero():
                # a vanishing factor kills the product outright; the product
                # weight may regain symmetry, where the collapsed identity
                # provably cannot hold, so the operator-level zero is asserted
                vanishing_pairs += 1
                assert product.is_zero()
                if not is_symmetric(ka) and not is_symmetric(kb):
                    continue
                assert expected.is_zero()
            else:
                assert product.terms == expected.terms, (ka, kb)
                assert product.class_orders == expected.class_orders, (ka, kb)
                held += 1
    elapsed = time.time() - start
    print(f"\nACCEPTANCE 3: PASS - functional product identity on {held} "
          f"nonvanishing pairs; {vanishing_pairs} pairs with a vanishing "
          f"factor collapse to the zero operator ({elapsed:.1f}s)")


def congruent_symmetric_pairs(sig, p, m):
    """All hypothesis-satisfying pairs with entries <= p^m (p-1) + m + 3."""
    cap = p ** m * (p - 1) + m + 3
    weights = list(symmetric_weights(sig, cap))
    pairs = []
    for i, ka in enumerate(weights):
        for kb in weights[i:]:
            flat_a = [x for vec in ka.entries for x in vec]
            flat_b = [x for vec in kb.entries for x in vec]
            if any((x - y) % (p ** m * (p - 1)) for x, y in zip(flat_a, flat_b)):
                continue
            if weight_congruent(ka, kb, p, m):
                pairs.append((ka, kb))
    return pairs


def test_criterion_4_congruence_theorem_sweep():
    start = time.time()
    total_pairs = 0
    swept = 0
    sigs = sweep_signatures(n_max=3, places=2)
    for p, m in itertools.product((5, 7), (1, 2)):
        for sig in sigs:
            pairs = congruent_symmetric_pairs(sig, p, m)
            total_pairs += len(pairs)

            def check(pair, p=p, m=m):
                ka, kb = pair
                return congruence_sweep(ka, kb, m, p)

            distinct = [pair for pair in pairs if pair[0] != pair[1]]
            for rep in parallel_map(check, distinct):
                assert rep["status"] == "ok", rep
                assert rep["hypotheses_met"]
                swept += 1
            # identical pairs hold definitionally; spot-check a few
            for ka, kb in [pr for pr in pairs if pr[0] == pr[1]][:3]:
                assert congruence_sweep(ka, kb, m, p)["status"] == "ok"

    # sharpness: a documented hypothesis-violating pair must fail
    sharp = congruence_sweep(Weight(SIG11, ((1, 1),)),
                             Weight(SIG11, ((21, 21),)), 1, 5)
    assert not sharp["hypotheses_met"]
    assert sharp["status"] == "counterexample"
    assert sharp["witness"]["alpha"] == [5]

    elapsed = time.time() - start
    assert elapsed < 600
    print(f"\nACCEPTANCE 4: PASS - {swept} distinct congruent pairs verified "
          f"on full grids (of {total_pairs} hypothesis-satisfying pairs), "
          f"sharpness witness reproduced ({elapsed:.1f}s)")


def test_criterion_5_vanishing_for_non_symmetric():
    start = time.time()
    checked = 0
    for kappa in criterion_2_weights():
        if is_symmetric(kappa):
            continue
        functional = lcan_expand(kappa)
        assert functional.is_zero(), kappa
        # spanning grid: per-variable degree is at most the depth
        labels = variable_labels(kappa.sig)
        depth = is_sum_symmetric(kappa)[1]
        points = range(min(depth + 2, 4))
        for combo in itertools.islice(
                itertools.product(points, repeat=len(labels)), 2000):
            alpha = {l: v for l, v in zip(labels, combo) if v}
            assert phi_oracle(kappa, alpha) == 0
        checked += 1
    elapsed = time.time() - start
    print(f"\nACCEPTANCE 5: PASS - zero polynomial for all {checked} "
          f"sum-symmetric non-symmetric weights in the sweep ({elapsed:.1f}s)")


def test_criterion_6_minor_formula_cross_check():
    start = time.time()
    rows = []
    uniform_rows, nonuniform_rows = 0, 0
    for kappa in criterion_2_weights():
        if not is_symmetric(kappa):
            continue
        report = phi_equivalence_report(kappa)
        functional = lcan_expand(kappa)
        orders = set(functional.class_orders.values()) or {1}
        uniform = len(orders) == 1
        # the minor formula must reproduce the multiplicity-weighted
        # expansion exactly, always
        assert report["weighted_equal"], (kappa, report)
        if uniform:
            # a single ordering multiplicity: the collapsed expansion differs
            # from the minor formula by exactly the factorial constant
            assert report["status"] in ("equal", "constant_ratio"), (kappa, report)
            assert report["matches_prediction"], (kappa, report)
            uniform_rows += 1
        else:
            # mixed multiplicities (first at the depth-4 double-column
            # weights): no single constant can exist, and the report says so
            assert report["status"] == "nonconstant_ratio", (kappa, report)
            nonuniform_rows += 1
        rows.append({
            "sig": kappa.sig.to_json(),
            "kappa": kappa.to_json(),
            "status": report["status"],
            "constant": report["constant"],
            "predicted_factorial_constant": report["predicted_factorial_constant"],
            "matches_prediction": report["matches_prediction"],
            "weighted_equal": report["weighted_equal"],
            "uniform_multiplicities": uniform,
            "class_orders": sorted(functional.class_orders.values()),
        })
    REPORTS.mkdir(exist_ok=True)
    with open(REPORTS / "phi_constant_table.json", "w") as fh:
        json.dump({"rows": rows}, fh, indent=2, sort_keys=True)
        fh.write("\n")
    elapsed = time.time() - start
    print(f"\nACCEPTANCE 6: PASS - minor formula matches the weighted "
          f"expansion on all {len(rows)} symmetric weights; constant = "
          f"factorial content on {uniform_rows} uniform weights, "
          f"{nonuniform_rows} mixed-multiplicity weights exactly diagnosed; "
          f"table emitted ({elapsed:.1f}s)")


def pure_weight_cases(n_max=4, depth_cap=3):
    """(sig, partition, ambient pure weight, index) with depth <= depth_cap."""
    sigs = [Signature(((a, n - a),)) for n in range(2, n_max + 1)
            for a in range(1, n)]
    sigs += [Signature(((1, 1), (1, 1))), Signature(((2, 1), (2, 1)))]
    for sig in sigs:
        for part in signature_partitions(sig, max_parts=min(sig.n, 3)):
            if part.num_parts == 1:
                continue
            for q, sub in enumerate(part.parts):
                for comp in sum_symmetric_weights(sub, depth_cap):
                    if comp.is_zero():
                        continue
                    vectors = []
                    for place in range(sig.num_places):
                        plus = [0] * sig.a_plus(place)
                        minus = [0] * sig.a_minus(place)
                        po = part.plus_offsets(place)[q]
                        mo = part.minus_offsets(place)[q]
                        cp = comp.plus_part(place)
                        cm = comp.minus_part(place)
                        plus[po:po + len(cp)] = cp
                        minus[mo:mo + len(cm)] = cm
                        vectors.append(tuple(plus) + tuple(minus))
                    lam = Weight(sig, tuple(vectors))
                    pure, index = is_pure(lam, part)
                    if pure and index == q:
                        yield sig, part, lam, q


def test_criterion_7_pullback_commutation_and_weyl_extension():
    start = time.time()
    commuted, extended = 0, 0
    for sig, part, lam, _q in pure_weight_cases():
        labels = variable_labels(sig)
        keep = build_restriction(part).keep
        ctx = RingCtx(5, 3, n_bound=sig.n)
        if is_symmetric(lam) and is_dominant(lam):
            # spanning set of shifted monomials: the eigenvalue must only see
            # kept coordinates and match the product-group eigenvalue
            for combo in itertools.islice(
                    itertools.product(range(3), repeat=len(labels)), 1024):
                alpha = {l: v for l, v in zip(labels, combo) if v}
                kept_alpha = {l: v for l, v in alpha.items() if l in keep}
                assert phi_oracle(lam, alpha) == phi_oracle(lam, kept_alpha)
                assert phi_oracle(lam, kept_alpha) == \
                    phi_subgroup(lam, part, kept_alpha)
            s = random_series(ctx, labels, seed=1)
            assert check_pure_commutation(lam, part, s)["commutes"]
            commuted += 1
        if not is_dominant(lam):
            chi = PAdicCharacterApprox(lam, level=1, symmetric=False)
            for seed in (0, 1):
                s = random_series(ctx, labels, seed=seed)
                result = extend_via_weyl(chi, part, s)
                assert result["holds"], (sig, part, lam)
            extended += 1
    elapsed = time.time() - start
    assert commuted and extended
    print(f"\nACCEPTANCE 7: PASS - commutation for {commuted} pure symmetric "
          f"weights, Weyl extension for {extended} pure non-dominant weights "
          f"({elapsed:.1f}s)")


def test_criterion_8_family_and_kummer_suite():
    start = time.time()
    ctx = RingCtx(5, 4, n_bound=4)
    toy = ToyCMContext(ctx)

    # transformation law on >= 10^3 random unit samples
    import random as _random
    rng = _random.Random(2024)
    zeta = CharacterZeta.classical(Weight(doubled_signature(1), ((0, 0),)))
    data = FData(4, 1, UnitCharacter.from_infinity_type(4, 1), zeta)
    F = build_F(data, toy)
    samples = 0
    for _ in range(250):
        x = toy.random_unit(rng)
        y = [[rng.randrange(toy.modulus)]]
        for e in toy.global_units():
            scaled = [[(pow(toy.norm(e), -1, toy.modulus) * y[0][0])
                       % toy.modulus]]
            assert F(toy.mul(e, x), scaled) == \
                norm_knu(e, data.k, data.nu, toy) * F(x, y)
            samples += 1
    assert samples >= 1000

    # moment tables congruent mod p^m for congruent character data
    checked_tables = 0
    for n in (1, 2):
        sig = doubled_signature(n)
        for m in (1, 2):
            delta = 5 ** (m - 1) * 4
            base_k = 4 * ((n + delta) // 4 + 1)  # k >= n, compatible chi_u
            kappa = Weight(sig, (tuple([1] * (2 * n)),))
            kappa_shift = Weight(
                sig, (tuple([1 + delta] * n + [1 + delta] * n),))
            t1 = measure_moment(MomentChar.basic(base_k, 0, n), kappa, 6, toy)
            t2 = measure_moment(MomentChar.basic(base_k + delta, 0, n),
                                kappa_shift, 6, toy)
            assert t1.terms, "vacuous congruence"
            assert t1.congruent(t2, m), (n, m)
            checked_tables += 1

    # the same congruences certified through the measure interface
    char = MomentChar.basic(4, 0, 1)
    kappa = Weight(doubled_signature(1), ((2, 2),))
    kappa_shift = Weight(doubled_signature(1), ((22, 22),))
    points = sample_points(toy, 1, 30, seed=8)
    cert = kummer_certify([[(1, char, kappa), (-1, char, kappa_shift)]],
                          1, points, 6, toy)
    assert cert["status"] == "ok" and cert["tests"][0]["moments_ok"]

    elapsed = time.time() - start
    assert elapsed < 300
    print(f"\nACCEPTANCE 8: PASS - transformation law on {samples} samples, "
          f"{checked_tables} moment-table congruences, Kummer certificate "
          f"({elapsed:.1f}s)")


def test_criterion_9_infrastructure(tmp_path):
    start = time.time()
    ctx = RingCtx(5, 4, n_bound=4)

    # binomial round trip
    for seed in range(5):
        s = random_series(ctx, VARS22, seed=seed)
        assert s.to_monomial().to_shifted() == s

    # theta commutation, exact equality of coefficient maps
    s = random_series(ctx, VARS22, seed=11)
    for a, b in itertools.combinations(VARS22, 2):
        assert s.theta_elementary(a).theta_elementary(b) == \
            s.theta_elementary(b).theta_elementary(a)

    # restriction is a ring homomorphism
    r = build_restriction(PART_11_11)
    a = random_series(ctx, VARS22, seed=12, cap=12)
    b = random_series(ctx, VARS22, seed=13, cap=12)
    assert res_series(a + b, r) == res_series(a, r) + res_series(b, r)
    assert res_series(a * b, r) == res_series(a, r) * res_series(b, r)

    # determinism: byte-identical reports across two runs
    commands = [
        ["congruence", "--p", "5", "--m", "1", "--sig", "1,1",
         "--kappa", "2,2", "--kappa-prime", "22,22", "--seed", "3"],
        ["restrict", "--sig", "2,2", "--part", "1,1/1,1",
         "--lambda", "1,1,1,1", "--witness", "builtin"],
        ["family", "--n", "2", "--k", "2", "--kappa", "1,1,1,1",
         "--height-cap", "3"],
    ]
    for idx, argv in enumerate(commands):
        out1 = tmp_path / f"run_{idx}_a.json"
        out2 = tmp_path / f"run_{idx}_b.json"
        run(argv + ["--out", str(out1)])
        run(argv + ["--out", str(out2)])
        assert out1.read_bytes() == out2.read_bytes()

    elapsed = time.time() - start
    print(f"\nACCEPTANCE 9: PASS - round trips, commutation, ring "
          f"homomorphism, deterministic reports ({elapsed:.1f}s)")
