from sullivan.cli import main

raise SystemExit(main())
