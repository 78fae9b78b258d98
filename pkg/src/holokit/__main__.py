from holokit.cli import main

raise SystemExit(main())
