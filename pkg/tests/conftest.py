"""Shared pytest plumbing: collects acceptance criterion verdicts and
echoes them as a section of the terminal summary."""

acceptance_lines: list[str] = []


def record_acceptance_line(line: str) -> None:
    acceptance_lines.append(line)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in acceptance_lines:
            terminalreporter.write_line(line)
