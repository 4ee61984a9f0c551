"""Offline side of the advice scheme.

Given an optimal reference packing, :func:`derive_params` computes every
quantity the online algorithm needs, and :func:`derive_advice_record` turns
them into an :class:`~bincover.encoding.AdviceRecord`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .core import (BinClass, Bin, Instance, Packing, PackingStats, classify_bin,
                   format_size, is_covered, is_large, packing_stats)
from .encoding import (EASY, HARD, AdviceRecord, AdviceTape,
                       approx_count, approx_scaled, choose_k, encode_advice,
                       encode_full_advice, truncate_real)
from .solver import optimal_cover

EASY_BETA = Fraction(15, 14)


class OracleError(ValueError):
    pass


def normalize_packing(instance: Instance, packing: Packing) -> Packing:
    """Rewrite covered bins so that none is outside the LS/LL/S classes.

    Covered bins with two or more large items keep their two largest; evicted
    large items are paired into new bins and evicted small items are re-packed
    with Dual-Next-Fit into new bins.  Coverage never decreases.
    """
    items = instance.items
    groups = []
    evicted_large, evicted_small = [], []
    for b in packing.bins:
        idx = list(b.item_indices)
        larges = [i for i in idx if is_large(items[i])]
        if is_covered(b) and len(larges) >= 2 and not (len(larges) == 2 and len(idx) == 2):
            keep = sorted(larges, key=lambda i: (-items[i], i))[:2]
            groups.append(sorted(keep))
            evicted_large.extend(i for i in larges if i not in keep)
            evicted_small.extend(i for i in idx if not is_large(items[i]))
        else:
            groups.append(idx)
    evicted_large.sort()
    evicted_small.sort()
    for p in range(0, len(evicted_large), 2):
        groups.append(evicted_large[p:p + 2])
    current, level = [], Fraction(0)
    for i in evicted_small:
        current.append(i)
        level += items[i]
        if level >= 1:
            groups.append(current)
            current, level = [], Fraction(0)
    if current:
        groups.append(current)
    return Packing.from_bins(instance, groups)


def good_order(instance: Instance) -> list[int]:
    """Item indices from largest to smallest; earlier arrival counts as larger."""
    return sorted(range(instance.n), key=lambda i: (-instance.items[i], i))


def alpha_hat(m_ls_down: int, m_ll_up: int, k: int) -> Fraction:
    """Client-side alpha from the approximate counts, valid for the true beta."""
    if m_ls_down <= 0:
        return Fraction(0)
    return alpha_bound(Fraction(m_ls_down + m_ll_up, m_ls_down), k)


def alpha_bound(beta: Fraction, k: int) -> Fraction:
    """Alpha as a function of the LL/LS ratio ``beta`` at precision ``k``."""
    eps = Fraction(1, 1 << k)
    q = (1 - eps) ** 2
    return q * (Fraction(7, 6) - beta) / (1 + Fraction(3, 2) * q * (1 + eps))


def _ls_like(bin: Bin, instance: Instance) -> bool:
    # a covered bin whose only item is large (size exactly 1) behaves like LS
    cls = classify_bin(bin, instance)
    if cls is BinClass.LS:
        return True
    return (cls is BinClass.OTHER and len(bin.item_indices) == 1
            and is_large(instance.items[bin.item_indices[0]]))


@dataclass
class DerivedParams:
    k: int
    m_ls: int
    m_ll: int
    m_s: int
    beta: Fraction | None
    n_g: int = 0
    good: list[int] = field(default_factory=list)
    s_g: Fraction | None = None
    d: Fraction | None = None
    d_up: Fraction | None = None
    m_lsb: int = 0
    n_b: int = 0
    s_b: Fraction | None = None
    s_b_down: Fraction | None = None
    s_b_up: Fraction | None = None
    e_b: int = 0
    e_b_down: int = 0
    x_b: int = 0
    m_b: int = 0
    m_b_down: int = 0
    m_w: int = 0
    m_w_down: int = 0
    m_r: int = 0
    m_ls_down: int = 0
    m_ll_up: int = 0
    alpha_hat: Fraction = Fraction(0)
    good_target: int = 0
    case_id: int = 0
    mode: str = EASY

    @property
    def eps(self) -> Fraction:
        return Fraction(1, 1 << self.k)

    def to_json(self) -> dict:
        out = {}
        for name, value in vars(self).items():
            if isinstance(value, Fraction):
                out[name] = format_size(value) if value > 0 else str(value)
            elif name == "good":
                out[name] = list(value)
            else:
                out[name] = value
        return out


def _reference_counts(instance: Instance, packing: Packing) -> tuple[int, int, int]:
    m_ls = m_ll = m_s = 0
    for b in packing.bins:
        if not b.item_indices or not is_covered(b):
            continue
        cls = classify_bin(b, instance)
        if _ls_like(b, instance):
            m_ls += 1
        elif cls is BinClass.LL:
            m_ll += 1
        elif cls is BinClass.S:
            m_s += 1
        else:
            raise OracleError("reference packing has a covered bin outside LS/LL/S; normalize it")
    return m_ls, m_ll, m_s


def derive_params(instance: Instance, reference: Packing, k: int | None = None,
                  alpha: Fraction | None = None) -> DerivedParams:
    """Compute every advice quantity from a normalized optimal packing.

    ``alpha`` overrides the client-side value; it only changes the case
    selection and the number of items declared good.
    """
    if k is None:
        k = choose_k(instance.n)
    items = instance.items
    m_ls, m_ll, m_s = _reference_counts(instance, reference)
    beta = Fraction(m_ls + m_ll, m_ls) if m_ls else None
    p = DerivedParams(k=k, m_ls=m_ls, m_ll=m_ll, m_s=m_s, beta=beta)
    p.n_g = m_ls // 3
    if m_ls == 0 or beta >= EASY_BETA or p.n_g == 0:
        return p

    p.m_ls_down = approx_count(m_ls, k).down()
    p.m_ll_up = approx_count(m_ll, k).up()
    order = good_order(instance)
    p.good = sorted(order[:p.n_g])
    p.s_g = items[order[p.n_g - 1]]
    p.d = 1 - p.s_g
    p.d_up = truncate_real(p.d, k).up()

    def black(i: int) -> bool:
        return p.d_up <= items[i] < Fraction(1, 2)

    for b in reference.bins:
        if b.item_indices and is_covered(b) and _ls_like(b, instance):
            if any(black(i) for i in b.item_indices):
                p.m_lsb += 1
    p.n_b = min(p.m_lsb, p.n_g)
    if p.n_b:
        blacks = sorted((i for i in range(instance.n) if black(i)), key=lambda i: (items[i], i))
        smallest = blacks[:p.n_b]
        p.s_b = items[smallest[-1]]
        approx = approx_scaled(p.s_b, k)
        p.s_b_down, p.s_b_up = approx.down(), approx.up()
        p.x_b = sum(1 for i in smallest if items[i] <= p.s_b_down)
        p.e_b = sum(1 for i in smallest if p.s_b_down < items[i] <= p.s_b_up)
        p.e_b_down = approx_count(p.e_b, k).down()
    p.m_b = p.x_b + p.e_b_down
    p.m_b_down = approx_count(p.m_b, k).down()
    p.m_w = p.n_g - p.n_b
    p.m_w_down = approx_count(p.m_w, k).down()
    p.m_r = p.m_b_down + p.m_w_down

    p.alpha_hat = alpha_hat(p.m_ls_down, p.m_ll_up, k) if alpha is None else Fraction(alpha)
    if p.alpha_hat <= 0:
        return p
    p.good_target = int(p.alpha_hat * p.m_ls_down)
    p.mode = HARD
    p.case_id = select_case(instance, set(p.good), p.m_r, p.good_target)
    return p


def select_case(instance: Instance, good: set[int], m_r: int, target: int) -> int:
    larges = [i for i in range(instance.n) if is_large(instance.items[i])]
    if sum(1 for i in larges[:m_r] if i in good) >= target:
        return 1
    if sum(1 for i in larges[m_r:2 * m_r] if i in good) >= target:
        return 2
    return 3


def record_from_params(instance: Instance, p: DerivedParams) -> AdviceRecord:
    k = p.k
    if p.mode == EASY:
        return AdviceRecord(k=k)
    s_b = e_b = None
    if p.n_b:
        s_b = approx_scaled(p.s_b, k)
        e_b = approx_count(p.e_b, k)
    return AdviceRecord(
        k=k, mode=HARD, case_id=p.case_id,
        m_ls=approx_count(p.m_ls, k), m_ll=approx_count(p.m_ll, k),
        d=truncate_real(p.d, k), has_black=p.n_b > 0, s_b=s_b, e_b=e_b,
        m_b=approx_count(p.m_b, k), m_w=approx_count(p.m_w, k))


def derive_advice_record(instance: Instance, normalized_opt: Packing, k: int | None = None,
                         alpha: Fraction | None = None) -> AdviceRecord:
    return record_from_params(instance, derive_params(instance, normalized_opt, k, alpha))


def full_advice(instance: Instance, opt: Packing) -> list[int]:
    """Bin index of every item in ``opt``, in arrival order."""
    return opt.assignment(instance.n)


def full_advice_tape(instance: Instance, opt: Packing) -> AdviceTape:
    return encode_full_advice(full_advice(instance, opt), len(opt.bins))


@dataclass
class OracleOutput:
    opt_packing: Packing
    opt_value: int
    stats: PackingStats
    derived: DerivedParams
    record: AdviceRecord

    def tape(self) -> AdviceTape:
        return encode_advice(self.record)


def run_oracle(instance: Instance, reference: Packing | None = None, k: int | None = None,
               alpha: Fraction | None = None) -> OracleOutput:
    """Solve (unless ``reference`` is given), normalize and derive the advice."""
    if reference is None:
        reference = optimal_cover(instance)
    opt = normalize_packing(instance, reference)
    derived = derive_params(instance, opt, k, alpha)
    return OracleOutput(opt, opt.covered_count, packing_stats(instance, opt, covered_only=True),
                        derived, record_from_params(instance, derived))
