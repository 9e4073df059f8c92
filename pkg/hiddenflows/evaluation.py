"""Precision and recall of detected flows against hand annotations."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

from hiddenflows.analysis import TaintFlow


@dataclass(frozen=True)
class FlowAnnotation:
    """One expected flow; file and sink_line narrow the match when given."""

    source_entry: str
    sink_entry: str
    file: Optional[str] = None
    sink_line: Optional[int] = None

    def matches(self, flow: TaintFlow) -> bool:
        if flow.source.entry_id != self.source_entry or flow.sink.entry_id != self.sink_entry:
            return False
        if self.file is not None and flow.sink.location.file != self.file:
            return False
        return self.sink_line is None or flow.sink.location.line == self.sink_line


@dataclass(frozen=True)
class EvaluationResult:
    tp: int
    fp: int
    fn: int
    missed: tuple[str, ...] = ()
    unexpected: tuple[str, ...] = ()

    @property
    def precision(self) -> float:
        detected = self.tp + self.fp
        return self.tp / detected if detected else 1.0

    @property
    def recall(self) -> float:
        expected = self.tp + self.fn
        return self.tp / expected if expected else 1.0


def _describe(package: str, flow: TaintFlow) -> str:
    return f"{package}: {flow.source.entry_id} -> {flow.sink.entry_id} at {flow.sink.location}"


def evaluate(
    results: Mapping[str, Sequence[TaintFlow]],
    annotations: Mapping[str, Sequence[FlowAnnotation]],
) -> EvaluationResult:
    """Match detected flows one-to-one against annotated flows

    The most specific annotations are matched first. A detected flow left over
    is a false positive, an annotation left over a false negative.

    Args:
        results (Mapping[str, Sequence[TaintFlow]]): Detected flows per package name
        annotations (Mapping[str, Sequence[FlowAnnotation]]): Expected flows per package name

    Returns:
        EvaluationResult: Counts with the unmatched items described
    """
    tp = 0
    missed: list[str] = []
    unexpected: list[str] = []
    for package in sorted(set(results) | set(annotations)):
        remaining = list(results.get(package, ()))
        expected = sorted(
            annotations.get(package, ()),
            key=lambda a: (a.sink_line is None, a.file is None),
        )
        for annotation in expected:
            match = next((flow for flow in remaining if annotation.matches(flow)), None)
            if match is None:
                missed.append(f"{package}: {annotation}")
                continue
            remaining.remove(match)
            tp += 1
        unexpected.extend(_describe(package, flow) for flow in remaining)
    return EvaluationResult(
        tp=tp,
        fp=len(unexpected),
        fn=len(missed),
        missed=tuple(missed),
        unexpected=tuple(unexpected),
    )
