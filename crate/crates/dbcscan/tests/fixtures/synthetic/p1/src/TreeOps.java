package com.fixture.p1;

public class TreeOps {

  public void pushTree(int size) {
    assert size >= 0;
    assert size < 10000 : "tree too large";
  }
}
