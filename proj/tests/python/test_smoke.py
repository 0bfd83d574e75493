import json
import math
import os
from pathlib import Path

import pytest

import wheelsim

ROOT = Path(os.environ.get("WHEELSIM_SOURCE_DIR", Path(__file__).resolve().parents[2]))
LEVELS = ROOT / "levels"


def level(name):
    return wheelsim.load_level_file(str(LEVELS / f"{name}.level.json"))


def test_mapping_examples():
    p = wheelsim.ChairParams()
    p.max_speed, p.max_yaw_rate, p.track_width = 1.0, 1.0, 0.6
    cmd = wheelsim.map_joystick(wheelsim.JoystickSample(0.5, 0.5), p)
    assert cmd.v_left == pytest.approx(0.65)
    assert cmd.v_right == pytest.approx(0.35)


def test_quarter_arc():
    st = wheelsim.ChairState(0.0, 0.0, 0.0)
    st.v_left, st.v_right = 0.7, 1.3
    out = wheelsim.integrate_pose(st, math.pi / 2)
    assert out.x == pytest.approx(1.0, abs=1e-9)
    assert out.y == pytest.approx(1.0, abs=1e-9)
    assert out.heading == pytest.approx(math.pi / 2, abs=1e-9)


def test_route_and_contrast():
    d, s = wheelsim.project_to_route((2.0, 2.0), [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0)])
    assert d == pytest.approx(math.sqrt(2.0))
    assert s == pytest.approx(2.0)
    assert wheelsim.contrast_ratio("#000000", "#FFFFFF") == 21.0
    assert wheelsim.contrast_ratio("#777777", "#FFFFFF") < 4.5


def test_normalize_and_calibrate():
    assert wheelsim.normalize([600, 512]).x == pytest.approx(0.0802, abs=1e-4)
    assert wheelsim.normalize([512, 512]).y == 0.0
    center, deadzone = wheelsim.calibrate_center([[511, 512], [513, 512]] * 20)
    assert center == [512, 512]
    assert deadzone == 0.05
    with pytest.raises(wheelsim.InsufficientSamples):
        wheelsim.calibrate_center([[512, 512]] * 5)


def test_level_loading():
    lv = level("straight_corridor")
    assert lv.id == "straight_corridor"
    assert len(lv.route) == 2
    assert wheelsim.validate_accessibility(lv) == []
    assert wheelsim.load_level(lv.to_json()) == lv
    with pytest.raises(wheelsim.ParseError):
        wheelsim.load_level_file(str(ROOT / "tests/fixtures/missing_route.level.json"))
    with pytest.raises(wheelsim.ValidationError):
        wheelsim.load_level_file(str(ROOT / "tests/fixtures/start_in_wall.level.json"))


def test_session_and_replay_agree():
    lv = level("straight_corridor")
    samples = [wheelsim.JoystickSample(0.0, 1.0, i / 60.0) for i in range(600)]
    report = wheelsim.replay(lv, samples)
    assert report.end_reason == "completed"
    assert report.metrics.completed

    session = wheelsim.Session(lv)
    while not session.ended:
        frame = session.tick(wheelsim.JoystickSample(0.0, 1.0))
    assert frame.events[-1].kind == "LevelCompleted"
    assert session.finalize().metrics.elapsed == report.metrics.elapsed
    with pytest.raises(wheelsim.SessionEnded):
        session.tick(wheelsim.JoystickSample(0.0, 0.0))

    body = json.loads(report.to_json())
    assert "written_at" not in body
    assert wheelsim.parse_report(report.to_json()) == report


def test_wire_messages():
    text = '{"type":"input","t":1.5,"axes":[0.25,-0.5],"extra":1}'
    assert wheelsim.wire_type(text) == "input"
    assert json.loads(wheelsim.wire_roundtrip(text)) == {"type": "input", "t": 1.5, "axes": [0.25, -0.5]}
    with pytest.raises(wheelsim.DecodeError):
        wheelsim.wire_roundtrip('{"type":"input","t":1.5')
