#! python3
# -*- encoding: utf-8 -*-
'''
@File    :   main.py
@Version :   1.0
@Desc    :   Main entry of the project
@Usage   :   python src/main.py check jacobi fixtures/sl2.yaml
'''

import sys, logging, os

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from linfrep.cli import main

log = logging.getLogger("linfrep")

if __name__ == '__main__':
    try:
      sys.exit(main())
    except KeyboardInterrupt:
      log.critical('Interrupted by user')
      try:
        sys.exit(130)
      except SystemExit:
        os._exit(130)
