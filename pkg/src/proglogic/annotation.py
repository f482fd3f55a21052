"""Per-line TPIR annotations and program-level label derivation.

Annotation files are the program text where every line carries a fixed-width
four-character prefix (Transcription flag, Processing digit 1-5, Inference
flag, Result flag) followed by one space.  Comment-only and docstring lines
carry an all-blank prefix.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .taxonomy import TaxonomyLabel

PREFIX_WIDTH = 5  # four marker columns plus one separating space


class AnnotationError(Exception):
    pass


@dataclass(frozen=True)
class LineAnnotation:
    line_no: int
    transcription: bool
    processing: Optional[int]  # 1..5 or None
    inference_time: bool
    result: bool
    code: str  # remainder of the line, verbatim, for round-tripping
    is_blank: bool = False  # whitespace-only source line, stored verbatim

    def marks(self) -> tuple[bool, Optional[int], bool, bool]:
        return (self.transcription, self.processing, self.inference_time, self.result)


@dataclass
class AgreementReport:
    line_agreement: float
    program_agreement: float
    n_lines: int
    n_programs: int


def parse_annotations(text: str) -> list[LineAnnotation]:
    """Parse one annotated program; raises AnnotationError with line numbers."""
    annotations: list[LineAnnotation] = []
    for line_no, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            annotations.append(LineAnnotation(line_no, False, None, False, False, line,
                                              is_blank=True))
            continue
        if len(line) < PREFIX_WIDTH:
            raise AnnotationError(f"line {line_no}: prefix narrower than {PREFIX_WIDTH} columns")
        t_col, p_col, i_col, r_col, sep = line[:PREFIX_WIDTH]
        if t_col not in "T ":
            raise AnnotationError(f"line {line_no}: transcription column must be 'T' or blank")
        if p_col not in "12345 ":
            raise AnnotationError(f"line {line_no}: processing column must be 1-5 or blank")
        if i_col not in "I ":
            raise AnnotationError(f"line {line_no}: inference column must be 'I' or blank")
        if r_col not in "R ":
            raise AnnotationError(f"line {line_no}: result column must be 'R' or blank")
        if sep != " ":
            raise AnnotationError(f"line {line_no}: fifth column must be a space")
        annotations.append(LineAnnotation(
            line_no=line_no,
            transcription=t_col == "T",
            processing=int(p_col) if p_col != " " else None,
            inference_time=i_col == "I",
            result=r_col == "R",
            code=line[PREFIX_WIDTH:],
        ))
    return annotations


def serialize_annotations(annotations: Sequence[LineAnnotation]) -> str:
    """Inverse of parse_annotations; byte-identical on a round trip."""
    lines = []
    for ann in annotations:
        if ann.is_blank:
            lines.append(ann.code)
            continue
        prefix = ("T" if ann.transcription else " ") \
            + (str(ann.processing) if ann.processing else " ") \
            + ("I" if ann.inference_time else " ") \
            + ("R" if ann.result else " ") + " "
        lines.append(prefix + ann.code)
    return "\n".join(lines)


def strip_annotations(annotations: Sequence[LineAnnotation]) -> str:
    """Recover the raw program text (for parsing and feature extraction)."""
    return "\n".join(ann.code for ann in annotations)


# Precedence for folding per-line processing marks into one program label.
# Stronger marks dominate: any Disorganized line taints the program, any
# brute-force loop dominates grounded styles, and Primitive only stands when
# nothing stronger appears.  Swappable via the `precedence` argument.
DEFAULT_PRECEDENCE = (5, 4, 3, 1, 2)

_P_TO_LABEL = {
    1: TaxonomyLabel.CONCEPTUAL,
    2: TaxonomyLabel.PRIMITIVE,
    3: TaxonomyLabel.FROM_SCRATCH,
    4: TaxonomyLabel.BRUTE_FORCE,
    5: TaxonomyLabel.DISORGANIZED,
}


def derive_label(annotations: Sequence[LineAnnotation],
                 precedence: Sequence[int] = DEFAULT_PRECEDENCE) -> TaxonomyLabel:
    if not annotations:
        raise AnnotationError("cannot derive a label from zero lines")
    present = {ann.processing for ann in annotations if ann.processing is not None}
    for p in precedence:
        if p in present:
            return _P_TO_LABEL[p]
    return TaxonomyLabel.NO_LOGIC


def agreement(a: Sequence[Sequence[LineAnnotation]],
              b: Sequence[Sequence[LineAnnotation]]) -> AgreementReport:
    """Inter-annotator agreement over identically sectioned program sets.

    Line agreement compares the four marker columns; program agreement
    compares derived labels.  Symmetric by construction.
    """
    if len(a) != len(b):
        raise AnnotationError(
            f"annotator sets differ in program count: {len(a)} vs {len(b)}")
    n_lines = agree_lines = 0
    n_programs = agree_programs = 0
    for index, (prog_a, prog_b) in enumerate(zip(a, b)):
        if len(prog_a) != len(prog_b):
            raise AnnotationError(f"program {index}: line counts differ")
        n_programs += 1
        for ann_a, ann_b in zip(prog_a, prog_b):
            n_lines += 1
            if ann_a.marks() == ann_b.marks():
                agree_lines += 1
        if derive_label(prog_a) == derive_label(prog_b):
            agree_programs += 1
    if n_programs == 0:
        raise AnnotationError("no programs to compare")
    return AgreementReport(
        line_agreement=agree_lines / n_lines if n_lines else 1.0,
        program_agreement=agree_programs / n_programs,
        n_lines=n_lines,
        n_programs=n_programs,
    )
