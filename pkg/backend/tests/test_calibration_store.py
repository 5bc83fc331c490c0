import threading

import pytest

from conic.calibration_store import CalibrationKey, CalibrationStore


def key(numerator: int) -> CalibrationKey:
    return CalibrationKey(numerator, 1e-14, 7.0, False, 0)


def test_get_or_create_builds_once():
    store = CalibrationStore()
    calls = []

    def factory():
        calls.append(1)
        return object()

    first = store.get_or_create(key(1), factory)
    assert store.get_or_create(key(1), factory) is first
    assert len(calls) == 1
    assert store.get(key(3)) is None


def test_list_all_keeps_insertion_order():
    store = CalibrationStore()
    a = store.get_or_create(key(3), object)
    b = store.get_or_create(key(1), object)
    assert store.list_all() == [a, b]
    store.clear()
    assert store.list_all() == []


def test_concurrent_access_builds_once():
    store = CalibrationStore()
    calls = []

    def factory():
        calls.append(1)
        return object()

    threads = [threading.Thread(target=store.get_or_create, args=(key(5), factory)) for _ in range(8)]
    for thread in threads:
        thread.start()
    for thread in threads:
        thread.join()
    assert len(calls) == 1


def test_slow_build_does_not_block_other_keys():
    store = CalibrationStore()
    started = threading.Event()
    release = threading.Event()

    def slow():
        started.set()
        release.wait(timeout=10)
        return "slow"

    worker = threading.Thread(target=store.get_or_create, args=(key(1), slow))
    worker.start()
    assert started.wait(timeout=10)
    try:
        assert store.get_or_create(key(3), lambda: "fast") == "fast"
        assert worker.is_alive()
        assert store.get(key(1)) is None
    finally:
        release.set()
        worker.join(timeout=10)
    assert store.get(key(1)) == "slow"
    assert store.list_all() == ["fast", "slow"]


def test_failed_build_can_be_retried():
    store = CalibrationStore()

    def broken():
        raise RuntimeError("fit failed")

    with pytest.raises(RuntimeError):
        store.get_or_create(key(1), broken)
    assert store.get_or_create(key(1), lambda: "ok") == "ok"


def test_key_serialization():
    assert key(-3).as_dict()["m"] == "-3/2"
