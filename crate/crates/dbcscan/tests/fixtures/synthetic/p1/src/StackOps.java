package com.fixture.p1;

public class StackOps {

  public void pushStack(int size) {
    assert size >= 0;
    assert size < 10000 : "stack too large";
  }
}
