from __future__ import annotations

from hypothesis import settings

settings.register_profile("qk", deadline=None, print_blob=True)
settings.load_profile("qk")


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = next((m for name, m in sys.modules.items() if name.endswith("test_acceptance")), None)
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        terminalreporter.write_line(mod.result_line(number))
