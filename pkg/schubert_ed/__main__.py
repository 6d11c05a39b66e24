import sys

if __name__ == '__main__':
    from schubert_ed.cli import main
    sys.exit(main())
