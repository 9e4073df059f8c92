import re
import sys
from importlib import metadata

# Lines after this marker are development tools, not needed to run
DEV_MARKER = "##Dev"


def runtime_requirements(requirements_file: str) -> list[str]:
    names = []
    with open(requirements_file, "r", encoding="utf-8") as f:
        for line in f:
            if line.startswith(DEV_MARKER):
                break
            requirement = line.split("#")[0].strip()
            if requirement:
                names.append(re.split("[<>=@ \\[]+", requirement)[0])
    return names


def main():
    missing_packages = []
    for name in runtime_requirements(sys.argv[1]):
        try:
            metadata.version(name)
        except metadata.PackageNotFoundError:
            missing_packages.append(name)

    if missing_packages:
        print("Missing packages:")
        print(", ".join(missing_packages))
        sys.exit(1)
    else:
        print("All packages are installed.")


if __name__ == "__main__":
    main()
