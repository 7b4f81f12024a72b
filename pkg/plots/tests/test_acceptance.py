"""Acceptance gate: every figure family renders a valid image from
fixture CSVs without modifying its inputs, and failures leave no file.
Each check prints one PASS/FAIL line.
"""

import hashlib
from pathlib import Path

from kleplots.cli import main

PNG_MAGIC = b"\x89PNG\r\n\x1a\n"

FAMILIES = [
    ("spectrum", "spectrum.csv", ["--analytic", "{d}/analytic_spectrum.csv"]),
    ("eigenfunctions", "eigenvectors.csv", ["--modes", "1,2,3"]),
    ("coeff-hist", "coefficients.csv", ["--mode", "1"]),
    ("kl-convergence", "kl_divergence_summary.csv", []),
    ("mesh-mode", "eigenvectors_vertices.csv", ["--mode", "1"]),
    ("torus-slice", "z0_slice.csv", ["--mode", "1"]),
    ("distance-hist", "distance_histogram.csv", []),
]


def sha256_all(directory):
    return {
        p.name: hashlib.sha256(p.read_bytes()).hexdigest()
        for p in sorted(Path(directory).iterdir())
    }


def report(name, ok, detail):
    print(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    assert ok, f"{name}: {detail}"


def test_every_family_renders_without_touching_inputs(fixture_csvs, tmp_path):
    before = sha256_all(fixture_csvs)
    results = []
    for family, csv_name, extra in FAMILIES:
        out = tmp_path / f"{family}.png"
        argv = [family, "--in", str(fixture_csvs / csv_name), "--out", str(out)]
        argv += [a.format(d=fixture_csvs) for a in extra]
        code = main(argv)
        valid = (
            code == 0
            and out.is_file()
            and out.read_bytes()[:8] == PNG_MAGIC
            and out.stat().st_size > 1000
        )
        results.append((family, valid))
    untouched = sha256_all(fixture_csvs) == before
    ok = untouched and all(v for _, v in results)
    report(
        "all figure families render valid PNGs, inputs unmodified",
        ok,
        f"{sum(v for _, v in results)}/{len(FAMILIES)} rendered, "
        f"input checksums unchanged={untouched}",
    )


def test_pdf_output_supported(fixture_csvs, tmp_path):
    out = tmp_path / "spectrum.pdf"
    code = main(["spectrum", "--in", str(fixture_csvs / "spectrum.csv"),
                 "--out", str(out)])
    ok = code == 0 and out.read_bytes()[:5] == b"%PDF-"
    report("vector (PDF) output", ok, f"exit {code}, header %PDF- present={ok}")


def test_schema_failures_leave_no_output(fixture_csvs, tmp_path):
    empty = tmp_path / "empty.csv"
    empty.write_text("")
    wrong = tmp_path / "wrong.csv"
    wrong.write_text("a,b\n1,2\n")
    cases = [
        (["spectrum", "--in", str(empty), "--out", str(tmp_path / "o1.png")], 2),
        (["spectrum", "--in", str(wrong), "--out", str(tmp_path / "o2.png")], 2),
        (["spectrum", "--in", str(tmp_path / "nope.csv"),
          "--out", str(tmp_path / "o3.png")], 4),
    ]
    codes = [main(argv) for argv, _ in cases]
    expected = [want for _, want in cases]
    no_files = not any((tmp_path / f"o{i}.png").exists() for i in (1, 2, 3))
    ok = codes == expected and no_files
    report(
        "schema/missing-input failures exit nonzero with no file written",
        ok,
        f"exit codes {codes} (want {expected}), no output files={no_files}",
    )
