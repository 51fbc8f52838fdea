"""Small-separation scaling laws: prediction, fitting, verification.

The asymptotic form of the interaction as d -> 0 is set by the case number
n (order of the first non-vanishing Taylor coefficient of f at s = 0)
against the kernel exponent nu:

    nu < n :  constant, O(d^0)          (saturation)
    nu = n :  -alpha f^(n-1)(0)/(n-1)! * log(d/d0)
    nu > n :  alpha f^(n-1)(0) / ((n-1)! (nu - n)) * d^(n - nu)

Logarithmic prefactors are per unit of natural log of d.  The reference
length d0 of the logarithmic branch depends on higher derivatives of f and
is only ever fitted, never predicted.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .distributions import CaseReport
from .errors import FitError, InvalidParameterError
from .interaction import InteractionCurve, Kernel

__all__ = [
    "LawForm",
    "AsymptoticLaw",
    "VerificationReport",
    "predict",
    "fit_scaling",
    "verify",
    "compose_cases",
    "smallest_decade",
]

# nu == n is the marginal (logarithmic) branch; detected only at exact
# equality up to this tolerance.
_NU_EQ_TOL = 1e-12

# A fit is reported as the given form only when its residual undercuts the
# runner-up by this dominance margin; otherwise the choice is ambiguous.
_DOMINANCE = 0.9

# Relative spread below which a window of values counts as constant.
_CONST_SPREAD = 0.02


class LawForm(enum.Enum):
    CONSTANT = "constant"
    LOGARITHMIC = "logarithmic"
    POWER_LAW = "power-law"


@dataclass(frozen=True)
class AsymptoticLaw:
    """One Table-row asymptotic behavior, predicted or fitted.

    ``prefactor`` is nW for Constant and PowerLaw forms, nW per natural-log
    unit for Logarithmic (the coefficient in -P ln(d/d0)); it is None for a
    predicted Constant whose magnitude the theory does not give.
    ``exponent`` is the PowerLaw decay power: I ~ prefactor * d^(-exponent).
    """

    form: LawForm
    prefactor: float | None
    exponent: float | None = None
    d0: float | None = None
    case_n: int | None = None
    nu: float | None = None
    residuals: dict | None = None
    ambiguous: bool = False


def predict(case_report: CaseReport, kernel: Kernel) -> AsymptoticLaw:
    """Select the asymptotic branch for a classified shape and kernel."""
    n = case_report.case_number
    nu = kernel.nu
    lead = case_report.leading_coefficient
    fact = math.factorial(n - 1)
    if abs(nu - n) < _NU_EQ_TOL:
        return AsymptoticLaw(
            LawForm.LOGARITHMIC,
            prefactor=kernel.alpha * lead / fact,
            case_n=n,
            nu=nu,
        )
    if nu > n:
        return AsymptoticLaw(
            LawForm.POWER_LAW,
            prefactor=kernel.alpha * lead / (fact * (nu - n)),
            exponent=nu - n,
            case_n=n,
            nu=nu,
        )
    return AsymptoticLaw(LawForm.CONSTANT, prefactor=None, case_n=n, nu=nu)


def smallest_decade(separations) -> tuple[float, float]:
    """Default fit window: the smallest decade of available separations."""
    d = np.asarray(separations, dtype=float)
    return float(d.min()), float(d.min() * 10.0)


def fit_scaling(curve: InteractionCurve, window: tuple[float, float]) -> AsymptoticLaw:
    """Fit the three candidate forms over a separation window and pick the best.

    Constant wins outright when the values barely move; otherwise the
    logarithmic and power-law fits compete on relative L2 residual in value
    space, with a 10% dominance margin below which the result is flagged
    ambiguous rather than forced.
    """
    lo, hi = window
    m = (curve.separations >= lo) & (curve.separations <= hi)
    if m.sum() < 8:
        raise FitError(f"need >= 8 points in window [{lo:g}, {hi:g}], have {int(m.sum())}")
    d = curve.separations[m]
    y = curve.values[m]
    norm = float(np.linalg.norm(y))
    if norm == 0.0:
        raise FitError("all values in the window are zero")
    ln_d = np.log(d)

    mean = float(np.mean(y))
    r_const = float(np.linalg.norm(y - mean)) / norm

    # I = a + b ln d  ->  prefactor -b, d0 = exp(a / -b)
    A = np.column_stack([np.ones_like(ln_d), ln_d])
    (a_log, b_log), *_ = np.linalg.lstsq(A, y, rcond=None)
    r_log = float(np.linalg.norm(y - A @ [a_log, b_log])) / norm

    if np.all(y > 0):
        (c_pow, m_pow), *_ = np.linalg.lstsq(A, np.log(y), rcond=None)
        y_pow = np.exp(c_pow + m_pow * ln_d)
        r_pow = float(np.linalg.norm(y - y_pow)) / norm
    else:
        c_pow = m_pow = 0.0
        r_pow = math.inf

    residuals = {"constant": r_const, "logarithmic": r_log, "power-law": r_pow}
    nu = curve.kernel.nu

    if r_const < _CONST_SPREAD:
        return AsymptoticLaw(
            LawForm.CONSTANT, prefactor=mean, nu=nu, residuals=residuals
        )

    ambiguous = min(r_log, r_pow) > _DOMINANCE * max(r_log, r_pow)
    if r_log <= r_pow:
        prefactor = -float(b_log)
        d0 = float(np.exp(a_log / prefactor)) if prefactor != 0.0 else None
        return AsymptoticLaw(
            LawForm.LOGARITHMIC,
            prefactor=prefactor,
            d0=d0,
            nu=nu,
            residuals=residuals,
            ambiguous=ambiguous,
        )
    return AsymptoticLaw(
        LawForm.POWER_LAW,
        prefactor=float(np.exp(c_pow)),
        exponent=-float(m_pow),
        nu=nu,
        residuals=residuals,
        ambiguous=ambiguous,
    )


@dataclass(frozen=True)
class VerificationReport:
    """Field-by-field comparison of a predicted law against a fitted one."""

    passed: bool
    form_match: bool
    prefactor_ok: bool | None
    exponent_ok: bool | None
    predicted: AsymptoticLaw
    fitted: AsymptoticLaw
    tol: float

    def text(self) -> str:
        lines = [
            "asymptotic-law verification "
            + ("PASS" if self.passed else "FAIL"),
            f"  form: predicted={self.predicted.form.value} "
            f"fitted={self.fitted.form.value} "
            + ("match" if self.form_match else "MISMATCH"),
        ]
        if self.prefactor_ok is not None:
            lines.append(
                f"  prefactor: predicted={self.predicted.prefactor:.6g} "
                f"fitted={self.fitted.prefactor:.6g} "
                + ("ok" if self.prefactor_ok else "OFF")
                + f" (tol {self.tol:g})"
            )
        if self.exponent_ok is not None:
            lines.append(
                f"  exponent: predicted={self.predicted.exponent:.6g} "
                f"fitted={self.fitted.exponent:.6g} "
                + ("ok" if self.exponent_ok else "OFF")
            )
        if not self.form_match:
            for which, law in (("predicted", self.predicted), ("fitted", self.fitted)):
                if law.residuals:
                    lines.append(f"  {which} residuals: " + ", ".join(
                        f"{k}={v:.3g}" for k, v in law.residuals.items()
                    ))
        return "\n".join(lines)

    def csv_row(self, shape: str) -> str:
        def fmt(v):
            return "%.17g" % v if v is not None else ""

        pred, fit = self.predicted, self.fitted
        return ",".join([
            shape,
            str(pred.case_n if pred.case_n is not None else ""),
            fmt(pred.nu),
            pred.form.value,
            fit.form.value,
            fmt(pred.prefactor),
            fmt(fit.prefactor),
            fmt(pred.exponent),
            fmt(fit.exponent),
            "1" if self.passed else "0",
        ])


CSV_ROW_HEADER = (
    "shape,case_n,nu,form_pred,form_fit,prefactor_pred,prefactor_fit,"
    "exponent_pred,exponent_fit,pass"
)


def verify(predicted: AsymptoticLaw, fitted: AsymptoticLaw, tol: float = 0.05) -> VerificationReport:
    """Pass/fail comparison at relative tolerance ``tol`` (forms must match exactly)."""
    form_match = predicted.form == fitted.form
    prefactor_ok: bool | None = None
    exponent_ok: bool | None = None
    if form_match and predicted.prefactor is not None and fitted.prefactor is not None:
        prefactor_ok = (
            abs(fitted.prefactor - predicted.prefactor)
            <= tol * abs(predicted.prefactor)
        )
    if form_match and predicted.form == LawForm.POWER_LAW:
        exponent_ok = abs(fitted.exponent - predicted.exponent) <= tol * abs(predicted.exponent)
    passed = form_match and prefactor_ok is not False and exponent_ok is not False
    return VerificationReport(
        passed, form_match, prefactor_ok, exponent_ok, predicted, fitted, tol
    )


def compose_cases(case_list) -> int:
    """Case number of a multi-scale composition: the sum of the case numbers."""
    cases = list(case_list)
    if not cases:
        raise InvalidParameterError("need at least one case number")
    if any(int(c) != c or c < 1 for c in cases):
        raise InvalidParameterError("case numbers must be integers >= 1")
    return int(sum(int(c) for c in cases))
