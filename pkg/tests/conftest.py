import pytest

from kernelsweep import tasks


@pytest.fixture(scope="session")
def desk_tasks():
    return {t.id: t for t in tasks.all_tasks("desk")}
