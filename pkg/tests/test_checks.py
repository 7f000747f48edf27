from rich.progress import Progress

from lagrangian_variety.checks import Check, Checks, progress_columns


def test_check_counts_passes_and_failures():
    check = Check("axioms", total=3)

    check.advance()
    check.fail("l is not closed")
    check.advance()

    assert check.completed == 3
    assert not check.passed
    assert check.failures == ["l is not closed"]


def test_open_ended_check_takes_total_on_completion():
    check = Check("sweep")

    check.advance(4)
    check.complete()

    assert check.total == 4


def test_context_manager_records_exceptions():
    check = Check("oracle", total=1)

    try:
        with check:
            raise AssertionError("bracket mismatch")
    except AssertionError:
        pass

    assert check.failures == ["AssertionError: bracket mismatch"]


def test_checks_aggregate_children():
    checks = Checks("verify A1")
    first = checks.create_check("model", total=2)
    second = checks.create_check("gh", "g + h Lagrangians", total=2)

    first.advance(2)
    second.fail("h_Delta")

    assert (checks.completed, checks.total) == (3, 4)
    assert not checks.passed
    assert checks.failures == ["g + h Lagrangians: h_Delta"]
    assert list(checks) == ["model", "gh"]


def test_recreating_a_check_detaches_the_old_one():
    checks = Checks()
    old = checks.create_check("model", total=1)

    checks.create_check("model", total=5)
    old.advance()

    assert (checks.completed, checks.total) == (0, 5)


def test_open_ended_child_leaves_branch_total_open():
    checks = Checks()
    checks.create_check("a", total=2)
    sweep = checks.create_check("b")

    assert checks.total is None

    sweep.advance()
    sweep.complete()

    assert checks.total == 3


def test_progress_columns_render_a_check():
    checks = Checks("verify A1")
    check = checks.create_check("model", "Chevalley model", total=1)
    check.advance()

    with Progress(*progress_columns(), disable=True) as progress:
        progress.add_task(checks.title, total=checks.total, completed=checks.completed)

        assert progress.tasks[0].percentage == 100.0
