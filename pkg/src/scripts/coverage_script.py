import sys
from pathlib import Path


def main(argv=None):
    """Run pytest with coverage and write html, xml, json and lcov reports under data/coverage.

    Installed as the ``coverage`` console script. Extra arguments are passed
    to pytest, e.g. ``coverage -m "not slow"``.
    """
    argv = list(argv or sys.argv[1:])

    out_dir = Path("data/coverage")
    out_dir.mkdir(parents=True, exist_ok=True)

    base_args = [
        "--cov=src/quicktalk_sim",
        f"--cov-report=html:{out_dir}/html",
        f"--cov-report=xml:{out_dir}/coverage.xml",
        f"--cov-report=json:{out_dir}/coverage.json",
        f"--cov-report=lcov:{out_dir}/coverage.lcov",
    ]
    # explicit paths replace the default test directory, bare options extend it
    if any(not arg.startswith("-") for arg in argv):
        final_args = base_args + argv
    else:
        final_args = base_args + argv + ["tests"]

    try:
        import pytest
    except Exception as exc:  # pragma: no cover - runtime/environmental
        print("Error: pytest is not available in the environment:", exc, file=sys.stderr)
        return 2

    print("Running pytest with coverage. Output directory:", out_dir)
    return pytest.main(final_args)


if __name__ == "__main__":
    raise SystemExit(main())
