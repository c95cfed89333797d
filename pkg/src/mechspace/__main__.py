"""Interface for ``python -m mechspace``."""

from collections.abc import Sequence

from .launch import create_app

__all__ = ["main"]


def main(args: Sequence[str] | None = None) -> None:
    """Entry point for the CLI."""
    app = create_app()
    app(args=None if args is None else list(args), prog_name="mechspace")


if __name__ == "__main__":
    main()
