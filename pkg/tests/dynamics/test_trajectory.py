# filename: test_trajectory.py
# @Time    : 2025/11/23 13:10
# @Software: PyCharm
import numpy as np
import pytest

from relaxuni.dynamics import Trajectory, read_trajectory, write_trajectory
from relaxuni.exceptions import ArgumentError, DimensionError, FormatError, MissingInputError


@pytest.fixture
def traj(rng: np.random.Generator) -> Trajectory:
    return Trajectory(times=[0.0, 0.5, 1.0], frames=rng.normal(size=(3, 6, 2)), source_id="grid:2x3", metadata={"tau": 0.2})


class TestTrajectory:
    def test_vector_frames_gain_channel_axis(self) -> None:
        t = Trajectory(times=[0.0, 1.0], frames=np.zeros((2, 4)))
        assert (len(t), t.n, t.d) == (2, 4, 1)

    def test_times_must_increase(self) -> None:
        with pytest.raises(ArgumentError):
            Trajectory(times=[0.0, 0.0], frames=np.zeros((2, 3)))

    def test_negative_start(self) -> None:
        with pytest.raises(ArgumentError):
            Trajectory(times=[-1.0], frames=np.zeros((1, 3)))

    def test_frame_count_mismatch(self) -> None:
        with pytest.raises(DimensionError):
            Trajectory(times=[0.0, 1.0], frames=np.zeros((3, 4)))

    def test_at_time(self, traj: Trajectory) -> None:
        np.testing.assert_array_equal(traj.at_time(0.5), traj.frames[1])
        with pytest.raises(ArgumentError):
            traj.at_time(0.25)


class TestTrajectoryFile:
    def test_write_then_read(self, traj: Trajectory, tmp_path) -> None:
        loaded = read_trajectory(write_trajectory(traj, tmp_path / "a.traj"))
        np.testing.assert_array_equal(loaded.times, traj.times)
        np.testing.assert_array_equal(loaded.frames, traj.frames)
        assert loaded.source_id == "grid:2x3"
        assert loaded.metadata == {"tau": 0.2}

    def test_no_sidecar_without_metadata(self, tmp_path) -> None:
        path = Trajectory(times=[0.0], frames=np.ones((1, 2))).save(tmp_path / "plain.traj")
        assert not path.with_suffix(".traj.json").exists()
        assert read_trajectory(path).source_id == ""

    def test_bad_magic(self, traj: Trajectory, tmp_path) -> None:
        path = write_trajectory(traj, tmp_path / "a.traj")
        raw = bytearray(path.read_bytes())
        raw[:4] = b"JUNK"
        path.write_bytes(bytes(raw))
        with pytest.raises(FormatError):
            read_trajectory(path)

    def test_truncated(self, traj: Trajectory, tmp_path) -> None:
        path = write_trajectory(traj, tmp_path / "a.traj")
        path.write_bytes(path.read_bytes()[:-8])
        with pytest.raises(FormatError):
            read_trajectory(path)

    def test_missing(self, tmp_path) -> None:
        with pytest.raises(MissingInputError):
            read_trajectory(tmp_path / "none.traj")
