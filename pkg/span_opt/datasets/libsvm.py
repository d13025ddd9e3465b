"""
LIBSVM text format.

One example per line: ``<label> <idx>:<val> <idx>:<val> ...`` with 1-based,
strictly increasing indices. Blank lines and '#' comments are skipped. Parsing
goes through scikit-learn's svmlight reader, which also opens ``.gz`` paths;
when it rejects the input, the lines are walked once more to report the first
bad one.
"""

import gzip
import io
import os
from typing import IO, Iterable, List, Optional, Tuple, Union

import numpy as np
import scipy.sparse
from sklearn.datasets import load_svmlight_file

from ..errors import NoMatchingExamples, ParseError
from ..objectives import Dataset
from ..utils.logger import setup_logger
from .schemas import RawExample

logger = setup_logger(__name__)

Source = Union[str, os.PathLike, IO]


def _parse_number(token: str, kind, line_no: int, what: str):
    try:
        return kind(token)
    except ValueError as exc:
        raise ParseError(f"non-numeric {what} {token!r}", line_no) from exc


def parse_line(line: str, line_no: int) -> RawExample:
    """Check one data line on its own; used to pin down where a file goes wrong"""
    tokens = line.split()
    if not tokens:
        raise ParseError("empty line", line_no)
    label = _parse_number(tokens[0], float, line_no, "label")
    if not np.isfinite(label):
        raise ParseError(f"non-finite label {tokens[0]!r}", line_no)

    indices: List[int] = []
    values: List[float] = []
    for token in tokens[1:]:
        if token.startswith("qid:"):
            continue
        index_text, sep, value_text = token.partition(":")
        if not sep or not index_text or not value_text:
            raise ParseError(f"malformed pair {token!r}", line_no)
        index = _parse_number(index_text, int, line_no, "index")
        value = _parse_number(value_text, float, line_no, "value")
        if index < 1:
            raise ParseError(f"index {index} is not positive", line_no)
        if indices and index - 1 <= indices[-1]:
            raise ParseError(f"index {index} does not increase after {indices[-1] + 1}", line_no)
        if not np.isfinite(value):
            raise ParseError(f"non-finite value {token!r}", line_no)
        indices.append(index - 1)
        values.append(value)

    return RawExample(label, indices, values)


def _raw_lines(source: Source, content: Optional[bytes]) -> List[bytes]:
    if content is not None:
        return content.splitlines()
    path = os.fspath(source)
    opener = gzip.open if path.endswith(".gz") else open
    with opener(path, "rb") as handle:
        return handle.read().splitlines()


def _locate_error(lines: Iterable[bytes], exc: Exception) -> ParseError:
    for line_no, raw in enumerate(lines, start=1):
        data = raw.split(b"#", 1)[0]
        try:
            text = data.decode("utf-8").strip()
        except UnicodeDecodeError:
            return ParseError("invalid UTF-8", line_no)
        if not text:
            continue
        try:
            parse_line(text, line_no)
        except ParseError as located:
            return located
    return ParseError(str(exc))


def _to_examples(features: scipy.sparse.csr_matrix, labels: np.ndarray) -> List[RawExample]:
    if not (np.all(np.isfinite(features.data)) and np.all(np.isfinite(labels))):
        raise ValueError("non-finite label or value")
    indptr = features.indptr
    return [
        RawExample(labels[row], features.indices[indptr[row]:indptr[row + 1]], features.data[indptr[row]:indptr[row + 1]])
        for row in range(features.shape[0])
    ]


def load_libsvm(source: Source) -> Tuple[List[RawExample], int]:
    """
    Parse a LIBSVM file or stream.

    Args:
        source: path (``.gz`` accepted) or an open text/binary stream

    Returns:
        (examples, dim) with dim the largest 1-based index seen

    Raises:
        ParseError: carrying the line number of the first malformed line
    """
    content: Optional[bytes] = None
    if hasattr(source, "read"):
        content = source.read()
        if isinstance(content, str):
            content = content.encode("utf-8")
        if not content.strip():
            return [], 0
        target = io.BytesIO(content)
    else:
        target = os.fspath(source)

    try:
        features, labels = load_svmlight_file(target, dtype=np.float64, zero_based=False)
        examples = _to_examples(features, labels)
    except ValueError as exc:
        raise _locate_error(_raw_lines(source, content), exc) from exc

    dim = max((ex.max_index for ex in examples), default=0)
    if content is None:
        logger.info(f"Loaded {len(examples)} examples (d={dim}) from {os.fspath(source)}")
    return examples, dim


def format_example(example: RawExample) -> str:
    # 17 significant digits so every double reads back bit for bit
    pairs = " ".join(f"{int(i) + 1}:{float(v):.17g}" for i, v in zip(example.indices, example.values))
    label = f"{example.label:.17g}"
    return f"{label} {pairs}" if pairs else label


def dump_libsvm(examples: Iterable[RawExample], destination: Source) -> int:
    """Write examples with full float precision; returns the number of lines written"""
    lines = [format_example(ex) for ex in examples]
    text = "\n".join(lines) + ("\n" if lines else "")
    if hasattr(destination, "write"):
        if isinstance(destination, io.TextIOBase):
            destination.write(text)
        else:
            destination.write(text.encode("utf-8"))
    else:
        path = os.fspath(destination)
        opener = gzip.open if path.endswith(".gz") else open
        with opener(path, "wt", encoding="utf-8") as handle:
            handle.write(text)
    return len(lines)


def to_binary_dataset(
    examples: List[RawExample],
    positive_label: float,
    negative_label: float,
    dense: bool = True,
    dim: Optional[int] = None,
) -> Dataset:
    """
    Keep the examples labeled ``positive_label`` or ``negative_label`` and map
    them to +1 / -1; every other example is dropped.
    """
    if positive_label == negative_label:
        raise ValueError(f"positive and negative labels are both {positive_label}")
    kept = [ex for ex in examples if ex.label in (positive_label, negative_label)]
    if not kept:
        raise NoMatchingExamples(f"no example is labeled {positive_label} or {negative_label}")

    width = max(ex.max_index for ex in kept)
    if dim is None:
        if width == 0:
            raise ValueError("kept examples have no features; pass dim to build an all-zero dataset")
        dim = width
    if dim < max(width, 1):
        raise ValueError(f"dim={dim} is smaller than the largest feature index {width}")

    indptr = np.cumsum([0] + [ex.nnz for ex in kept])
    indices = np.concatenate([ex.indices for ex in kept])
    values = np.concatenate([ex.values for ex in kept])
    features = scipy.sparse.csr_matrix((values, indices, indptr), shape=(len(kept), dim))
    labels = np.array([1.0 if ex.label == positive_label else -1.0 for ex in kept])

    dropped = len(examples) - len(kept)
    if dropped:
        logger.info(f"Dropped {dropped} examples with labels outside ({positive_label}, {negative_label})")
    return Dataset(features.toarray() if dense else features, labels)
