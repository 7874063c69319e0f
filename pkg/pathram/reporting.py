"""
Report generation: JSON payloads, CSV tables and plain-text summaries
"""

import csv
import io
import json
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence

from .algebraic import QuadraticSurd, to_significant
from .models import (
    CeilingReport,
    GameResult,
    InvariantVerdict,
    LowerBoundCertificate,
    PeriodAnalysis,
    RecursionTrace,
    SearchReport,
    StrategyWalk,
    TableReport,
    format_rate,
)
from .walks import format_walk

TABLE_COLUMNS = ["ell", "kstar", "table_value", "diff", "status"]


def stringify(value: Any) -> Any:
    """Turn every number into a decimal string, recursively"""
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, int):
        return str(value)
    if isinstance(value, Fraction):
        return format_rate(value)
    if isinstance(value, StrategyWalk):
        return format_walk(value)
    if isinstance(value, dict):
        return {key: stringify(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [stringify(item) for item in value]
    return value


def irrational(surd: QuadraticSurd) -> Dict[str, str]:
    return {"value": to_significant(surd.to_decimal(30)), "expression": surd.expression}


class ReportGenerator:
    """Builds the payloads printed by the command-line interface"""

    def search_payload(self, report: SearchReport) -> Dict[str, Any]:
        counters = report.counters
        payload = {
            "l1": report.targets[0],
            "l2": report.targets[1],
            "kstar": report.kstar,
            "method": report.method,
            "witnesses": list(report.witnesses),
            "nodes": {
                "expanded": counters.nodes_expanded,
                "pruned_bound": counters.nodes_pruned_bound,
                "pruned_dominance": counters.nodes_pruned_dominance,
                "leaves": counters.leaves,
            },
        }
        return stringify(payload)

    def trace_payload(self, trace: RecursionTrace, beta: Optional[int] = None,
                      delta: Optional[Fraction] = None) -> Dict[str, Any]:
        """Trace export: the arrays k and x_s plus k(alpha) under k_final"""
        payload: Dict[str, Any] = {
            "walk": trace.walk,
            "targets": list(trace.walk.targets),
            "d": trace.walk.d,
            "k_final": trace.k_final,
            "k": trace.k_values,
        }
        for color in range(1, trace.walk.colors + 1):
            payload[f"x{color}"] = trace.x(color)
        if beta is not None:
            payload["beta"] = beta
        if delta is not None:
            payload["delta"] = delta
        return stringify(payload)

    def table_rows(self, report: TableReport) -> List[Dict[str, Any]]:
        return [stringify(row.model_dump()) for row in report.rows]

    def period_payload(self, analysis: PeriodAnalysis) -> Dict[str, Any]:
        return stringify({
            "p": analysis.p,
            "period": analysis.period_length,
            "increment": analysis.increment,
            "delta": analysis.rate,
            "onset": analysis.onset,
            "beta": analysis.beta,
            "checked_until": analysis.checked_until,
        })

    def family_payload(self, c: int, t: int, lengths: Sequence[int], walk: StrategyWalk,
                       beta: int, delta: Fraction, limit: QuadraticSurd) -> Dict[str, Any]:
        payload = stringify({
            "c": c,
            "t": t,
            "lengths": list(lengths),
            "walk": walk,
            "beta": beta,
            "delta": delta,
        })
        payload["delta_decimal"] = to_significant(delta)
        payload["limit"] = irrational(limit)
        payload["gap"] = to_significant(limit.to_decimal(40) - _decimal(delta))
        return payload

    def ceiling_payload(self, report: CeilingReport, limit: QuadraticSurd) -> Dict[str, Any]:
        payload = stringify({
            "c": report.c,
            "max_ell": report.max_ell,
            "walks_checked": report.walks_checked,
            "max_delta": report.max_delta,
            "argmax": report.argmax,
            "violations": list(report.violations),
            "passed": report.passed,
        })
        payload["limit"] = irrational(limit)
        return payload

    def certificate_payload(self, certificate: LowerBoundCertificate) -> Dict[str, Any]:
        return stringify({
            "t": certificate.t,
            "ell_hat": certificate.ell_hat,
            "k": certificate.k,
            "bound": f"{format_rate(certificate.coeff)} * ell_hat^{format_rate(certificate.exponent)}",
            "holds": certificate.holds,
        })

    def game_payload(self, result: GameResult, verdict: Optional[InvariantVerdict] = None) -> Dict[str, Any]:
        payload: Dict[str, Any] = {
            "targets": list(result.targets),
            "outcome": result.outcome,
            "decisions": result.decisions,
            "tree_sizes": result.tree_sizes,
            "losing_color": result.losing_color,
            "final_path_length": result.final_path_length,
            "largest_component": result.largest_component,
            "steps": result.steps,
            "cap": result.cap,
        }
        if verdict is not None:
            payload["invariant"] = verdict.model_dump()
        if result.transcript:
            payload["transcript"] = [
                {
                    "new_vertex": entry.new_vertex,
                    "edges": [list(edge) for edge in entry.edges],
                    "color": entry.color,
                    "component_size": entry.component_size,
                    "copy_of_tree": entry.copy_of_tree,
                }
                for entry in result.transcript
            ]
        return stringify(payload)

    def render(self, payload: Any, output_format: str) -> str:
        """Serialise a payload (dict, or list of table rows) as json, csv or text"""
        if output_format == "json":
            return json.dumps(payload, indent=2)
        if output_format == "csv":
            return self._render_csv(payload)
        return self._render_text(payload)

    def _render_csv(self, payload: Any) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        if isinstance(payload, list):
            columns = list(payload[0]) if payload else TABLE_COLUMNS
            writer.writerow(columns)
            for row in payload:
                writer.writerow([row[column] for column in columns])
        else:
            writer.writerow(["field", "value"])
            for key, value in payload.items():
                writer.writerow([key, _flat(value)])
        return buffer.getvalue().rstrip("\n")

    def _render_text(self, payload: Any) -> str:
        if isinstance(payload, list):
            lines = ["  ".join(f"{key}={value}" for key, value in row.items()) for row in payload]
            return "\n".join(lines)
        lines = []
        for key, value in payload.items():
            if isinstance(value, list) and value and isinstance(value[0], (dict, list)):
                lines.append(f"{key}:")
                lines.extend(f"  {_flat(item)}" for item in value)
            elif isinstance(value, list) and key in ("witnesses", "violations"):
                lines.append(f"{key}:")
                lines.extend(f"  {item}" for item in value)
            else:
                lines.append(f"{key}: {_flat(value)}")
        return "\n".join(lines)


def _flat(value: Any) -> str:
    if isinstance(value, dict):
        return " ".join(f"{key}={_flat(item)}" for key, item in value.items())
    if isinstance(value, list):
        return " ".join(_flat(item) for item in value)
    if value is None:
        return "-"
    return str(value)


def _decimal(value: Fraction) -> Decimal:
    with localcontext() as ctx:
        ctx.prec = 40
        return Decimal(value.numerator) / Decimal(value.denominator)
