"""
Taffin Text Rendering

Plain-text views of reports for --emit text. JSON stays the canonical form.
"""
from typing import List

from taffin.models import RunReport


def _instance(values: List[int]) -> str:
    return "(" + ",".join(str(v) for v in values) + ")"


def _sign(sign: int) -> str:
    return {1: "+", -1: "-"}.get(sign, "")


def render_text(report: RunReport) -> str:
    """Human-readable summary, one line per result"""
    lines = [
        f"{report.command.value} {report.config_name} [{'PASS' if report.passed else 'FAIL'}]",
        f"tool {report.tool_version}  schema {report.schema_version}  q_i = {report.qi_interpretation}",
        f"config {report.config_digest[:16]}",
    ]
    catalog = report.data.get("catalog")
    if catalog:
        lines.append("")
        for entry in catalog:
            head = f"{entry['relation']}{_instance(entry['instance'])}{entry['sign']}"
            lines.append(head)
            for key, value in sorted(entry["payload"].items()):
                lines.append(f"    {key}: {value}")
    elif report.results:
        lines.append("")
        for r in report.results:
            lines.append(
                f"{r.relation}{_instance(r.instance)}{_sign(r.sign):<2} {r.status.value:<16} "
                f"{r.coefficients_checked:>8}"
            )
            if r.first_failure is not None:
                w = r.first_failure
                lines.append(f"    at {w.basis} [{', '.join(w.exponents)}]: {w.lhs} != {w.rhs}")
    if report.identities:
        lines.append("")
        for ident in report.identities:
            lines.append(f"{'ok  ' if ident.passed else 'FAIL'} {ident.name}")
            if ident.detail and not ident.passed:
                lines.append(f"    {ident.detail}")
    other = {k: v for k, v in report.data.items() if k != "catalog"}
    if other:
        lines.append("")
        for key, value in sorted(other.items()):
            lines.append(f"{key}: {value}")
    if report.discrepancy_log:
        lines.append("")
        lines.append("known discrepancies:")
        lines.extend(f"  - {note}" for note in report.discrepancy_log)
    return "\n".join(lines) + "\n"
