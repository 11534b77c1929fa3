"""CSV とテキストレポートの書き出し（17桁、LF、引用符なし）"""

from __future__ import annotations

import csv
import io
import math
import sys
from pathlib import Path
from typing import Iterable, Sequence

from kanshou import config


def format_value(value) -> str:
    """数値を倍精度の往復が保証される 17 有効桁で表す"""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        return f"{value:.{config.FLOAT_SIGNIFICANT_DIGITS}g}"
    return str(value)


def _writer(buffer: io.StringIO):
    # 値は format_value で文字列化済み。区切り文字を含まないので引用符は付かない
    return csv.writer(buffer, lineterminator=config.CSV_LINE_TERMINATOR)


def sweep_csv(
    header: Sequence[str],
    columns: Sequence[Iterable[float]],
    metadata: Sequence[tuple[str, object]] = (),
) -> str:
    """
    列データを CSV 文字列にする

    1行目はヘッダ、末尾に '#key,value' 形式のメタデータ行を付ける。
    """
    columns = [list(c) for c in columns]
    if len(header) != len(columns):
        raise ValueError("header and columns differ in length")
    if len({len(c) for c in columns}) > 1:
        raise ValueError("columns differ in length")
    buffer = io.StringIO()
    writer = _writer(buffer)
    writer.writerow(header)
    writer.writerows([format_value(float(v)) for v in row] for row in zip(*columns))
    writer.writerows((f"#{key}", format_value(value)) for key, value in metadata)
    return buffer.getvalue()


def key_value_report(items: Sequence[tuple[str, object]]) -> str:
    """'key,value' 行のレポート（CSV と同じ書式規則）"""
    buffer = io.StringIO()
    _writer(buffer).writerows((key, format_value(value)) for key, value in items)
    return buffer.getvalue()


def emit(text: str, out: str | Path | None = None):
    """out があればファイルへ（UTF-8, LF）、なければ標準出力へ"""
    if out is None:
        sys.stdout.write(text)
        return
    with open(out, "w", encoding="utf-8", newline="") as f:
        f.write(text)
