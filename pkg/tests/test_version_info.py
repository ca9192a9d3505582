from dexassist import show_version_info


def test_show_version_info():
    info = show_version_info()
    print(info)
    assert info.startswith("dexassist version info:")
    assert "numpy-" in info


if __name__ == "__main__":
    test_show_version_info()
